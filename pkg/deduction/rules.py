"""
Rule catalog and system modes.

Rules carry the numbers used for them in the literature only where such a number is cited;
the rest are known by name. ``NEGATIVEISH`` is the set of rules that, in the V modes, may not
be applied under a universal neighbourhood quantifier. It ships empty.
"""
from enum import Enum
from typing import Dict, FrozenSet, Optional, Tuple


class RuleId(Enum):
    HYP = "HYP"
    PREMISE = "PREMISE"
    AND_I = "ANDI"
    AND_E_L = "ANDEL"
    AND_E_R = "ANDER"
    OR_I_L = "ORIL"
    OR_I_R = "ORIR"
    OR_E = "ORE"
    IMP_I = "IMPI"
    IMP_E = "IMPE"
    BOT_N_E = "BOTNE"
    BOT_W_E = "BOTWE"
    BOT_TRANSFER = "BOTTRANSFER"
    L2C = "L2C"
    C2L = "C2L"
    ALL_W_I = "ALLWI"
    ALL_W_E = "ALLWE"
    SOME_W_I = "SOMEWI"
    SOME_W_E = "SOMEWE"
    ALL_N_I = "ALLNI"
    ALL_N_E = "ALLNE"
    SOME_N_I = "SOMENI"
    SOME_N_E = "SOMENE"
    LIFT = "LIFT"
    RULE_31 = "RULE31"
    T_AXIOM = "TAXIOM"
    T_I = "TI"
    T_E = "TE"
    T_SPLIT = "TSPLIT"
    B_AXIOM = "BAXIOM"
    B_I = "BI"
    B_E = "BE"
    B_SPLIT = "BSPLIT"
    CLASS_ABS = "CLASSABS"

    @property
    def number(self) -> Optional[int]:
        return RULE_NUMBERS.get(self)

    @property
    def display(self) -> str:
        return f"{self.value} ({self.number})" if self.number else self.value


RULE_NUMBERS: Dict[RuleId, int] = {
    RuleId.OR_E: 5,
    RuleId.CLASS_ABS: 7,
    RuleId.IMP_I: 11,
    RuleId.IMP_E: 12,
    RuleId.L2C: 13,
    RuleId.C2L: 14,
    RuleId.SOME_W_E: 18,
    RuleId.SOME_N_E: 20,
    RuleId.RULE_31: 31,
    RuleId.T_AXIOM: 32,
    RuleId.T_I: 33,
    RuleId.T_E: 34,
    RuleId.T_SPLIT: 35,
    RuleId.B_AXIOM: 36,
    RuleId.B_I: 37,
    RuleId.B_E: 38,
    RuleId.B_SPLIT: 39,
}


class SystemMode(Enum):
    IPUC = "ipuc"
    IPUCV = "ipucv"
    IPUCV31 = "ipucv31"
    PUC = "puc"


HEREDITARY_RULES: FrozenSet[RuleId] = frozenset({
    RuleId.T_AXIOM, RuleId.T_I, RuleId.T_E, RuleId.T_SPLIT,
    RuleId.B_AXIOM, RuleId.B_I, RuleId.B_E, RuleId.B_SPLIT,
})

BASE_RULES: FrozenSet[RuleId] = frozenset(RuleId) - HEREDITARY_RULES - {RuleId.RULE_31, RuleId.CLASS_ABS}

MODE_RULES: Dict[SystemMode, FrozenSet[RuleId]] = {
    SystemMode.IPUC: BASE_RULES,
    SystemMode.IPUCV: BASE_RULES | HEREDITARY_RULES,
    SystemMode.IPUCV31: BASE_RULES | HEREDITARY_RULES | {RuleId.RULE_31},
    SystemMode.PUC: BASE_RULES | {RuleId.CLASS_ABS},
}

NEGATIVEISH: FrozenSet[RuleId] = frozenset()

ARITY: Dict[RuleId, int] = {
    RuleId.HYP: 0, RuleId.PREMISE: 0, RuleId.T_AXIOM: 0, RuleId.B_AXIOM: 0,
    RuleId.AND_I: 2, RuleId.IMP_E: 2, RuleId.SOME_W_E: 2, RuleId.SOME_N_E: 2,
    RuleId.RULE_31: 2, RuleId.T_SPLIT: 2, RuleId.B_SPLIT: 2,
    RuleId.OR_E: 3,
}

# Premise positions whose open hypotheses a rule may discharge.
DISCHARGE_SCOPE: Dict[RuleId, Tuple[int, ...]] = {
    RuleId.OR_E: (1, 2),
    RuleId.IMP_I: (0,),
    RuleId.SOME_W_E: (1,),
    RuleId.SOME_N_E: (1,),
    RuleId.RULE_31: (0, 1),
    RuleId.T_SPLIT: (0, 1),
    RuleId.B_SPLIT: (0, 1),
    RuleId.CLASS_ABS: (0,),
}

BINDERS: FrozenSet[RuleId] = frozenset({RuleId.ALL_W_I, RuleId.SOME_W_E, RuleId.ALL_N_I, RuleId.SOME_N_E})

CASE_SPLITS: FrozenSet[RuleId] = frozenset({
    RuleId.OR_E, RuleId.SOME_W_E, RuleId.SOME_N_E, RuleId.RULE_31, RuleId.T_SPLIT, RuleId.B_SPLIT,
})


def arity(rule: RuleId) -> int:
    return ARITY.get(rule, 1)


def discharge_scope(rule: RuleId) -> Tuple[int, ...]:
    return DISCHARGE_SCOPE.get(rule, ())


def rules_of(mode: SystemMode) -> FrozenSet[RuleId]:
    return MODE_RULES[mode]


def parse_mode(text: str) -> SystemMode:
    try:
        return SystemMode(text.lower())
    except ValueError:
        raise ValueError(f"unknown mode {text!r}") from None
