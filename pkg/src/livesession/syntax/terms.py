"""Abstract syntax for processes, data expressions and session types.

Every node is an immutable, hashable dataclass.  Branch arms (in both
processes and types) keep their source order for printing but compare as
label-keyed maps.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Optional, Tuple, Union

Label = str
LabelSet = frozenset


def labelset(*labels) -> frozenset:
    return frozenset(labels)


def _cached_hash(cls):
    """Memoise the dataclass-generated hash; states are hashed a lot."""
    orig = cls.__hash__

    def __hash__(self):
        try:
            return self.__dict__["_hash"]
        except KeyError:
            h = orig(self)
            object.__setattr__(self, "_hash", h)
            return h

    cls.__hash__ = __hash__
    return cls


class Polarity(enum.Enum):
    PLUS = "+"
    MINUS = "-"

    def dual(self) -> "Polarity":
        return Polarity.MINUS if self is Polarity.PLUS else Polarity.PLUS

    def __str__(self):
        return self.value


Plus = Polarity.PLUS
Minus = Polarity.MINUS


@dataclass(frozen=True)
class Chan:
    name: str
    pol: Polarity

    def dual(self) -> "Chan":
        return Chan(self.name, self.pol.dual())

    def is_co(self, other: "Chan") -> bool:
        return self.name == other.name and self.pol is not other.pol

    def __str__(self):
        return f"{self.name}{self.pol.value}"

    def __lt__(self, other):
        return (self.name, self.pol.value) < (other.name, other.pol.value)


def chan(text: str) -> Chan:
    """``chan("k+")`` -> ``Chan("k", Plus)``."""
    return Chan(text[:-1], Polarity(text[-1]))


def dual_subject(subject):
    """Dual of a transition subject; ``None`` stands for tau and is self-dual."""
    return None if subject is None else subject.dual()


# ---------------------------------------------------------------- values


@dataclass(frozen=True)
class IntV:
    n: int


@dataclass(frozen=True)
class BoolV:
    b: bool


@dataclass(frozen=True)
class SymV:
    name: str
    args: Tuple["Value", ...] = ()


Value = Union[IntV, BoolV, SymV]

TRUE = BoolV(True)
FALSE = BoolV(False)


# ------------------------------------------------------------ expressions


@_cached_hash
@dataclass(frozen=True)
class Lit:
    value: Value


@_cached_hash
@dataclass(frozen=True)
class Var:
    name: str


@_cached_hash
@dataclass(frozen=True)
class Unary:
    op: str
    arg: "Expr"


@_cached_hash
@dataclass(frozen=True)
class Binary:
    op: str
    left: "Expr"
    right: "Expr"


@_cached_hash
@dataclass(frozen=True)
class Apply:
    fname: str
    args: Tuple["Expr", ...] = ()


Expr = Union[Lit, Var, Unary, Binary, Apply]

UNARY_OPS = ("-", "not")
BINARY_OPS = ("+", "-", "*", "=", "<", "<=", ">", ">=", "&&", "||")


def IntLit(n: int) -> Lit:
    return Lit(IntV(n))


def BoolLit(b: bool) -> Lit:
    return Lit(BoolV(b))


# -------------------------------------------------------------- processes


class _ArmsEq:
    """Equality and hashing of ``arms`` as a label-keyed map."""

    def _key(self):
        return (type(self).__name__, self.chan_or_none(), frozenset(self.arms))

    def chan_or_none(self):
        return getattr(self, "chan", None)

    def __eq__(self, other):
        if self is other:
            return True
        if type(other) is not type(self):
            return NotImplemented
        return self.chan_or_none() == other.chan_or_none() and dict(self.arms) == dict(other.arms)

    def __hash__(self):
        try:
            return self.__dict__["_hash"]
        except KeyError:
            h = hash(self._key())
            object.__setattr__(self, "_hash", h)
            return h


@_cached_hash
@dataclass(frozen=True)
class Send:
    chan: Chan
    expr: Expr
    cont: "Process"


@_cached_hash
@dataclass(frozen=True)
class Recv:
    chan: Chan
    var: str
    cont: "Process"


@_cached_hash
@dataclass(frozen=True)
class Sel:
    chan: Chan
    label: Label
    cont: "Process"


@dataclass(frozen=True, eq=False)
class Bra(_ArmsEq):
    chan: Chan
    arms: Tuple[Tuple[Label, "Process"], ...]

    def __post_init__(self):
        labels = [l for l, _ in self.arms]
        if len(set(labels)) != len(labels):
            raise ValueError(f"duplicate branch labels in {labels}")

    def arm(self, label):
        for l, p in self.arms:
            if l == label:
                return p
        raise KeyError(label)


@_cached_hash
@dataclass(frozen=True)
class Inact:
    pass


@_cached_hash
@dataclass(frozen=True)
class Par:
    left: "Process"
    right: "Process"


@_cached_hash
@dataclass(frozen=True)
class Rec:
    var: str
    body: "Process"
    invariant: Optional[frozenset] = None


@_cached_hash
@dataclass(frozen=True)
class PRec:
    var: str
    index: str
    bound: Expr
    body: "Process"
    after: "Process"


@_cached_hash
@dataclass(frozen=True)
class PVar:
    var: str
    chans: Tuple[Chan, ...] = ()


@_cached_hash
@dataclass(frozen=True)
class If:
    cond: Expr
    then: "Process"
    else_: "Process"


Process = Union[Send, Recv, Sel, Bra, Inact, Par, Rec, PRec, PVar, If]
PREFIXES = (Send, Recv, Sel, Bra)

INACT = Inact()


def par(*procs) -> Process:
    """Left-associated parallel composition of one or more processes."""
    out = procs[0]
    for p in procs[1:]:
        out = Par(out, p)
    return out


# ---------------------------------------------------------- session types


@_cached_hash
@dataclass(frozen=True)
class End:
    pass


@_cached_hash
@dataclass(frozen=True)
class Out:
    cont: "SessionType"


@_cached_hash
@dataclass(frozen=True)
class In:
    cont: "SessionType"


@dataclass(frozen=True, eq=False)
class Branch(_ArmsEq):
    arms: Tuple[Tuple[Label, frozenset, "SessionType"], ...]

    def __post_init__(self):
        _check_type_arms(self.arms)

    def _key(self):
        return ("&", frozenset((l, L, t) for l, L, t in self.arms))

    def __eq__(self, other):
        if self is other:
            return True
        if type(other) is not type(self):
            return NotImplemented
        return _arm_map(self.arms) == _arm_map(other.arms)

    __hash__ = _ArmsEq.__hash__

    def arm(self, label):
        return _arm_map(self.arms)[label]


@dataclass(frozen=True, eq=False)
class Select(Branch):
    def _key(self):
        return ("+", frozenset((l, L, t) for l, L, t in self.arms))


def _arm_map(arms):
    return {l: (L, t) for l, L, t in arms}


def _check_type_arms(arms):
    labels = [a[0] for a in arms]
    if len(set(labels)) != len(labels):
        raise ValueError(f"duplicate labels in {labels}")
    for a in arms:
        if not isinstance(a[1], frozenset):
            raise TypeError("response sets must be frozensets")


@_cached_hash
@dataclass(frozen=True)
class Mu:
    var: str
    body: "SessionType"


@_cached_hash
@dataclass(frozen=True)
class TVar:
    name: str


SessionType = Union[End, Out, In, Branch, Select, Mu, TVar]

END = End()


def branch(*arms) -> Branch:
    """``branch(("a", {"b"}, T), ...)``; response sets may be any iterable."""
    return Branch(tuple((l, frozenset(L), t) for l, L, t in arms))


def select(*arms) -> Select:
    return Select(tuple((l, frozenset(L), t) for l, L, t in arms))
