"""Parabolic stratifications of character varieties of the classical groups."""

from .evaluation import builtin_table, evaluate_stratification, tw_reference
from .levi import cocharacter_of_subset, flag_description, levi_shape, closed_form_levi_shape, torus_description
from .motive import AtomTable, EPolynomial, VirtualClass, adams, molien_torus_quotient, specialize, sym_epoly
from .partitions import Partition, StratumLabel, enumerate_partitions, label_from_subset, subset_from_label
from .rootdata import GroupFamily, Kind, build_root_datum, dual_root_datum, pairing, reflect, weyl_order
from .strata import cross_validate, emit, langlands_pairing, stratify, stratify_by_formula
from .weyl import NOT_SIMPLE, WeylElement, act_on_subset, enumerate_weyl, stabilizer_quotient_order, subset_orbits

__all__ = [
    "AtomTable", "EPolynomial", "GroupFamily", "Kind", "NOT_SIMPLE", "Partition", "StratumLabel",
    "VirtualClass", "WeylElement", "act_on_subset", "adams", "build_root_datum", "builtin_table",
    "cocharacter_of_subset", "cross_validate", "dual_root_datum", "emit", "enumerate_partitions",
    "enumerate_weyl", "evaluate_stratification", "flag_description", "label_from_subset",
    "langlands_pairing", "levi_shape", "molien_torus_quotient", "pairing", "closed_form_levi_shape",
    "reflect", "specialize", "stabilizer_quotient_order", "stratify", "stratify_by_formula",
    "subset_from_label", "subset_orbits", "sym_epoly", "torus_description", "tw_reference",
    "weyl_order",
]
