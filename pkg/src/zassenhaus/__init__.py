"""Conjugacy class sizes and divisibility graphs of PSL(2,q) and Sz(q)."""

from .closed_form import (
    ClassEntry,
    ClassSizeTable,
    GroupSpec,
    InvalidGroupError,
    check_class_equation,
    class_table,
    group_spec,
    psl2_table,
    sz_table,
)
from .divgraph import (
    ComponentShape,
    DivisibilityGraph,
    build_divgraph,
    classify_shape,
    components,
    export_graph,
)
from .finite_field import FieldCtx, FieldElement, field_arith, field_make, frobenius_r

__version__ = "0.1.0"
