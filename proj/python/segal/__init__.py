import json

from ._segal import (
    C_f_constant,
    DomainError,
    LaurentMap,
    ModelParams,
    ParseError,
    W_constant,
    compose,
    dn_annulus,
    hamiltonian,
    invert,
    mc_vacuum_element,
    propagator,
    sector_labels,
    suite_names,
)

__all__ = [
    "C_f_constant",
    "DomainError",
    "LaurentMap",
    "ModelParams",
    "ParseError",
    "W_constant",
    "compose",
    "dn_annulus",
    "hamiltonian",
    "invert",
    "mc_vacuum_element",
    "propagator",
    "run_suite",
    "sector_labels",
    "suite_names",
]


def run_suite(name, **config):
    from ._segal import _run_suite_json

    return json.loads(_run_suite_json(name, config))
