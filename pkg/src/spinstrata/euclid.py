"""
Twist words that add and subtract b-curve indices, and the Euclidean
reduction of a curve system to the one with all zeros of order gcd(kappa).

The group generated by twists in the a and a' curves is a lifted braid group
of a chain; every word here comes from an explicit braid on that chain.
Words are checked by their action on framed homology mod 2g-2 and on the
integral symplectic lattice.  That is a necessary condition for the isotopy
statements behind them, not a proof of them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .curve_system import CurveName, LabelingCase, a, ap, b, b_rep, c, labeling_case, normalize
from .errors import InvalidInput, UnsupportedCase
from .framed import (
    FramedClass,
    framed_class_of,
    integral_homology,
    transvection_matrix,
    twist_generator,
    twist_transvection,
)
from .spin import genus_of_partition, kappa_gcd, validate_partition

ONE_TWO = LabelingCase.ONE_TWO
THREE = LabelingCase.THREE


# --- words --------------------------------------------------------------------

@dataclass(frozen=True)
class TwistWord:
    """A product of twists, written left to right; the rightmost letter acts first."""

    letters: tuple = ()

    def __post_init__(self):
        out = []
        for name, e in self.letters:
            e = int(e)
            if e not in (1, -1):
                raise InvalidInput(f"exponent must be +1 or -1, got {e}")
            out.append((CurveName.parse(name), e))
        object.__setattr__(self, "letters", tuple(out))

    def __len__(self):
        return len(self.letters)

    def __mul__(self, other: "TwistWord") -> "TwistWord":
        return TwistWord(self.letters + other.letters)

    def inverse(self) -> "TwistWord":
        return TwistWord(tuple((n, -e) for n, e in reversed(self.letters)))

    def conjugate(self, name, e: int = 1) -> "TwistWord":
        """self T(name)^e self^-1."""
        return self * T(name, e) * self.inverse()

    def names(self) -> set:
        return {n for n, _ in self.letters}

    def substitute(self, name: CurveName, conj: "TwistWord", inner: CurveName) -> "TwistWord":
        """Replace each T(name)^e by conj T(inner)^e conj^-1."""
        out = []
        for n, e in self.letters:
            if n == name:
                out.extend(conj.conjugate(inner, e).letters)
            else:
                out.append((n, e))
        return TwistWord(tuple(out))

    def reduced(self) -> "TwistWord":
        out = []
        for n, e in self.letters:
            if out and out[-1][0] == n and out[-1][1] == -e:
                out.pop()
            else:
                out.append((n, e))
        return TwistWord(tuple(out))

    def act(self, x: FramedClass, g: int, case: LabelingCase) -> FramedClass:
        for name, e in reversed(self.letters):
            x = twist_transvection(x, twist_generator(name, g, case, x.r), e)
        return x

    def to_json(self) -> list:
        return [[str(n), e] for n, e in self.letters]

    @classmethod
    def from_json(cls, data) -> "TwistWord":
        try:
            return cls(tuple((n, e) for n, e in data))
        except (TypeError, ValueError):
            raise InvalidInput("a word is a list of [curve, exponent] pairs")


def T(name, e: int = 1) -> TwistWord:
    return TwistWord(((name, e),))


IDENTITY = TwistWord()


def symplectic_of(word: TwistWord, g: int, case: LabelingCase) -> np.ndarray:
    from .framed import integral_homology

    M = np.identity(2 * g, dtype=object)
    for name, e in word.letters:
        M = M.dot(transvection_matrix(integral_homology(name, g, case), e))
    return M


@dataclass(frozen=True)
class BraidWord:
    """A braid written left to right as a product of generators sigma_k^e."""

    strands: int
    letters: tuple = ()

    def __post_init__(self):
        for k, e in self.letters:
            if not 1 <= k < self.strands or e not in (1, -1):
                raise InvalidInput(f"bad braid letter {(k, e)} on {self.strands} strands")

    def __mul__(self, other: "BraidWord") -> "BraidWord":
        if other.strands != self.strands:
            raise InvalidInput("strand counts differ")
        return BraidWord(self.strands, self.letters + other.letters)

    def inverse(self) -> "BraidWord":
        return BraidWord(self.strands, tuple((k, -e) for k, e in reversed(self.letters)))

    def to_json(self) -> dict:
        return {"strands": self.strands, "letters": [list(x) for x in self.letters]}


def braid_to_twists(bw: BraidWord, chain: Sequence[CurveName]) -> TwistWord:
    """Lift a braid on len(chain)+1 strands, sigma_k to the twist in the k-th chain curve."""
    if bw.strands != len(chain) + 1:
        raise InvalidInput(f"braid on {bw.strands} strands does not match a chain of {len(chain)} curves")
    return TwistWord(tuple((chain[k - 1], e) for k, e in bw.letters))


def run(strands: int, lo: int, hi: int, e: int = 1) -> BraidWord:
    """sigma_lo sigma_lo+1 ... sigma_hi, or the descending product when lo > hi."""
    step = 1 if hi >= lo else -1
    return BraidWord(strands, tuple((k, e) for k in range(lo, hi + step, step)))


def block_pass(strands: int, s: int, q: int, p: int, e: int = 1) -> BraidWord:
    """
    Strands in positions s+q .. s+q+p-1 pass, leftmost first, across the q
    strands to their left.  e = +1 passes in front.
    """
    moves = []
    for k in range(p):
        moves.extend(range(s + q - 1 + k, s + k - 1, -1))
    # the first move happens first, so it is written last
    return BraidWord(strands, tuple((m, e) for m in reversed(moves)))


# --- chains -------------------------------------------------------------------

def main_chain(g: int) -> list:
    """a_1, a_1', a_2, ..., a_g: the chain filling the a-subsurface in case OneTwo."""
    out = []
    for m in range(1, g + 1):
        out.append(a(m))
        if m < g:
            out.append(ap(m))
    return out


def subchain(g: int, m: int) -> list:
    """The three chains of case Three whose subsurfaces are hyperelliptic."""
    tail = []
    for k in range(3, g + 1):
        tail.append(a(k))
        if k < g:
            tail.append(ap(k))
    if m == 1:
        return [a(2), ap(2)] + tail
    if m == 2:
        return [a(1), ap(1)] + tail
    if m == 3:
        return [a(1), ap(1), a(3), ap(2), a(2)]
    raise InvalidInput(f"no subchain {m}")


def lift(bw: BraidWord, chain) -> TwistWord:
    return braid_to_twists(bw, chain)


# --- verification ---------------------------------------------------------------

@dataclass(frozen=True)
class Verification:
    framed: bool
    symplectic: bool
    sign: int

    @property
    def ok(self) -> bool:
        return self.framed and self.symplectic


def verify_detail(word: TwistWord, source, target, g: int, case: LabelingCase) -> Verification:
    from .framed import integral_homology

    src = framed_class_of(source, g, case)
    tgt = framed_class_of(target, g, case)
    img = word.act(src, g, case)
    sign = 1 if img == tgt else (-1 if img == -tgt else 0)
    M = symplectic_of(word, g, case)
    v = M.dot(np.array(integral_homology(source, g, case), dtype=object))
    w = np.array(integral_homology(target, g, case), dtype=object)
    symp = bool((v == w).all() or (v == -w).all())
    return Verification(sign != 0, symp, sign)


def verify_word(word: TwistWord, source, target, g: int, case: LabelingCase) -> bool:
    """word(source) = +-target on framed homology mod 2g-2 and on integral homology."""
    return verify_detail(word, source, target, g, case).ok


# --- index pairs ------------------------------------------------------------------

def _modulus(g):
    return 2 * g - 2


def _check_genus(g, case):
    if g < 4:
        raise UnsupportedCase("the index arithmetic needs genus at least 4")


def _marks(g, case):
    return (1, g) if case is ONE_TWO else (2, g, 2 * g - 2)


def _pair(i: int, j: int, g: int) -> tuple:
    """Integer positions i in 1..2g-2 and j = i + length, with the length checked."""
    m = _modulus(g)
    i = b_rep(i, g)
    length = (b_rep(j, g) - i) % m
    if not 1 <= length <= g - 2:
        raise InvalidInput(f"pair ({i},{b_rep(j, g)}) has cyclic length {length}, outside 1..{g - 2}")
    return i, i + length


def regime(i: int, j: int, g: int, case: LabelingCase) -> str:
    """one-sided, two-sided or three-sided, for an ordered pair of b indices."""
    m = _modulus(g)
    i, j = _pair(i, j, g)
    inside = {b_rep(t, g) for t in range(i + 1, j)}
    hit = [p for p in _marks(g, case) if p in inside]
    if not hit:
        return "one-sided"
    if case is THREE and 2 in hit and m in hit:
        return "three-sided"
    return "two-sided"


def c_length(name, g: int, case: LabelingCase) -> int:
    """Number of steps between the first and last b curve a c curve meets."""
    name = normalize(name, g, case)
    if case is THREE and name.i == 1:
        return 2 if name.j == 2 else name.j - 2
    return name.j - name.i


@dataclass(frozen=True)
class PairWords:
    """
    Words for an ordered pair (i, j) and an auxiliary curve `curve`:
    forward(b_i) = b_j using T(curve), and to_curve(b_i) = curve using T(b_j).
    """

    i: int
    j: int
    curve: CurveName
    forward: TwistWord
    to_curve: TwistWord
    regime: str


@dataclass(frozen=True)
class PivotWords:
    """
    word(b_i) = T(curve) T(b_pivot)(e), where lead^-1(b_j) = T(b_pivot)(e).
    """

    i: int
    j: int
    pivot: int
    curve: CurveName
    e: Optional[CurveName]
    word: TwistWord
    lead: TwistWord


def _one_sided_pair_words(i, j, curve, W, kind="one-sided") -> PairWords:
    # W(b_i) = T(b_j)^-1(curve) = T(curve)(b_j)
    bj = b(j)
    return PairWords(i, j, curve, T(curve, -1) * W, T(bj) * W, kind)


def _pivot_pair_words(pv: PivotWords, kind: str) -> PairWords:
    # pv.word(b_i) = T(d) T(b_P)(e) = T(d) lead^-1(b_j)
    d, U, Wp = pv.curve, pv.word, pv.lead
    forward = Wp * T(d, -1) * U
    to_curve = Wp.inverse() * T(b(pv.j)) * Wp * U
    return PairWords(pv.i, pv.j, d, forward, to_curve, kind)


# case OneTwo -----------------------------------------------------------------------

def _one_sided_12(i: int, j: int, g: int):
    """(curve, W) with W(b_i) = T(curve)(b_j); i < j are integer positions."""
    n = 2 * g
    ch = main_chain(g)
    if j <= g:
        return c(i, j), lift(run(n, 2 * j - 1, 2 * i - 1), ch)
    ist, jst = 2 * g - j, 2 * g - i
    return c(ist, jst), lift(run(n, 2 * ist - 1, 2 * jst - 1), ch)


def _pivot_12(i: int, j: int, g: int) -> PivotWords:
    n = 2 * g
    ch = main_chain(g)
    length = j - i
    if i < g < j:
        e, W = _one_sided_12(g, j, g)
        U = lift(block_pass(n, 2 * g - 2 * j + 2 * i - 1, 2 * j - 2 * g + 1, 2 * g - 2 * i), ch)
        return PivotWords(i, b_rep(j, g), g, c(g - length, g), e, U, W)
    ist, jj = 2 * g - i, j - (2 * g - 2)
    e, W = _one_sided_12(1, jj, g)
    U = lift(block_pass(n, 1, 2 * ist - 2, 2 * jj), ch)
    return PivotWords(i, jj, 1, c(1, length + 1), e, U, W)


# case Three ------------------------------------------------------------------------
#
# Away from the left end the subchains A_1 and A_2 look like the OneTwo chain of
# genus g-1, with every b index lowered by one.  Around the left end the chain
# A_3 = a_1, a_1', a_3, a_2', a_2 carries b_(2g-2), b_1 and b_2.

_LEFT_END = {(0, 1): c(1, 3), (1, 2): c(2, 3), (0, 2): c(1, 2)}


def _one_sided_3(i: int, j: int, g: int):
    m = _modulus(g)
    if 2 <= i and j <= g:
        return c(i, j), lift(run(2 * g - 2, 2 * j - 3, 2 * i - 3), subchain(g, 1))
    if g <= i and j <= m:
        ist, jst = 2 * g - 1 - j, 2 * g - 1 - i
        curve = c(ist + 1, jst + 1) if ist >= 2 else c(1, jst + 1)
        return curve, lift(run(2 * g - 2, 2 * ist - 1, 2 * jst - 1), subchain(g, 2))
    # left end, positions 2g-2, 1, 2 become 0, 1, 2
    lo, hi = (0 if i == m else i), j - m if j > m else j
    return _LEFT_END[(lo, hi)], lift(run(6, 2 * hi + 1, 2 * lo + 1), subchain(g, 3))


def _left_end_word(g: int, jj: int) -> TwistWord:
    """
    Element of the a-curve group taking T(b_(2g-2))(c(1, jj+2)) to
    T(b_2)(c(2, jj)), with c(2, 2) read as a_2.  It is a product of one braid
    in each of the three subchains.
    """
    A1, A2, A3 = subchain(g, 1), subchain(g, 2), subchain(g, 3)
    n = 2 * g - 2
    return (
        lift(block_pass(n, 1, 2, 2 * jj - 2), A2)
        * lift(block_pass(6, 1, 2, 4), A3)
        * lift(block_pass(n, 1, 2, 2 * jj), A1)
    )


def _left_end_lead(g: int, jj: int) -> TwistWord:
    """lead with lead^-1(b_jj) = T(b_(2g-2))(c(1, jj+2))."""
    if jj == 2:
        W = T(a(2))
    else:
        W = _one_sided_3(2, jj, g)[1]
    return W * _left_end_word(g, jj)


def _pivot_3(i: int, j: int, g: int) -> PivotWords:
    m = _modulus(g)
    n = 2 * g - 2
    length = j - i
    if 3 <= i < g < j < m:
        e, W = _one_sided_3(g, j, g)
        U = lift(block_pass(n, 2 * g - 2 * j + 2 * i - 3, 2 * j - 2 * g + 1, 2 * g - 2 * i), subchain(g, 1))
        return PivotWords(i, j, g, c(g - length, g), e, U, W)
    jj = j - m
    if i == 1:
        e, W = _one_sided_3(2, j, g)
        U = lift(block_pass(n, 1, 2, 2 * j - 2), subchain(g, 1))
        return PivotWords(i, j, 2, c(2, j + 1), e, U, W)
    if g < i < m and jj == 1:
        e, W = _one_sided_3(m, m + 1, g)
        U = lift(block_pass(n, 1, 4 * g - 2 * i - 4, 4), subchain(g, 2))
        return PivotWords(i, 1, m, c(1, 2 * g - i + 1), e, U, W)
    if g < i < m and jj >= 2:
        U = lift(block_pass(n, 2, 4 * g - 2 * i - 4, 2 * jj + 1), subchain(g, 2))
        return PivotWords(i, jj, m, c(1, 2 * g - i + jj), c(1, jj + 2), U, _left_end_lead(g, jj))
    raise InvalidInput(f"no pivot construction for the pair ({i},{b_rep(j, g)})")  # pragma: no cover


def _pair_words_3(i: int, j: int, g: int, kind: str) -> PairWords:
    m = _modulus(g)
    if kind == "one-sided":
        curve, W = _one_sided_3(i, j, g)
        return _one_sided_pair_words(i, b_rep(j, g), curve, W)
    if i == m:
        # b_(2g-2) and b_jj with 3 <= jj: Y(b_jj) = T(b_(2g-2))(curve) = T(curve)^-1(b_(2g-2))
        jj = j - m
        curve = c(1, jj + 2)
        Y = _left_end_lead(g, jj).inverse()
        forward = Y.inverse() * T(curve, -1)
        to_curve = Y * T(b(jj)) * Y.inverse()
        return PairWords(i, jj, curve, forward, to_curve, kind)
    return _pivot_pair_words(_pivot_3(i, j, g), kind)


# public ------------------------------------------------------------------------------

def one_sided_words(i: int, j: int, g: int, case: LabelingCase = ONE_TWO) -> tuple:
    """
    For a one-sided pair: (curve, W) with W(b_i) = T(b_j)^-1(curve) = T(curve)(b_j),
    so that W^-1(b_j) = T(b_i)(curve) = T(curve)^-1(b_i).
    """
    _check_genus(g, case)
    if regime(i, j, g, case) != "one-sided":
        raise InvalidInput(f"pair ({i},{j}) is not one-sided")
    i, j = _pair(i, j, g)
    return _one_sided_12(i, j, g) if case is ONE_TWO else _one_sided_3(i, j, g)


def two_sided_words(i: int, j: int, g: int, case: LabelingCase = ONE_TWO) -> PivotWords:
    """
    For a pair separated by one marked index P: word(b_i) = T(curve) T(b_P)(e),
    with lead^-1(b_j) = T(b_P)(e).
    """
    _check_genus(g, case)
    if regime(i, j, g, case) != "two-sided":
        raise InvalidInput(f"pair ({i},{j}) is not two-sided")
    i, j = _pair(i, j, g)
    if case is ONE_TWO:
        return _pivot_12(i, j, g)
    if i == _modulus(g):
        raise InvalidInput("pairs starting at 2g-2 use the left-end word, not a pivot braid")
    return _pivot_3(i, j, g)


def three_sided_word(i: int, j: int, g: int) -> PivotWords:
    """Case Three, pair passing both 2g-2 and 2: the pivot data around 2g-2."""
    _check_genus(g, THREE)
    if regime(i, j, g, THREE) != "three-sided":
        raise InvalidInput(f"pair ({i},{j}) is not three-sided")
    i, j = _pair(i, j, g)
    return _pivot_3(i, j, g)


def left_end_word(j: int, g: int) -> TwistWord:
    """Case Three: takes T(b_(2g-2))(c(1,j+2)) to T(b_2)(c(2,j)); j = 2 means c(2,2) = a_2."""
    _check_genus(g, THREE)
    if not 2 <= j <= g - 2:
        raise InvalidInput(f"j = {j} outside 2..{g - 2}")
    return _left_end_word(g, j)


def pair_words(i: int, j: int, g: int, case: LabelingCase) -> PairWords:
    """Both halves of the heuristic for the pair (i, j), around its natural auxiliary curve."""
    _check_genus(g, case)
    kind = regime(i, j, g, case)
    i, j = _pair(i, j, g)
    if case is THREE:
        return _pair_words_3(i, j, g, kind)
    if kind == "one-sided":
        curve, W = _one_sided_12(i, j, g)
        return _one_sided_pair_words(i, b_rep(j, g), curve, W)
    return _pivot_pair_words(_pivot_12(i, j, g), kind)


# --- transport of c curves ------------------------------------------------------------

def _shift_up(m: int, length: int, g: int, case: LabelingCase) -> TwistWord:
    """Element of the chain group taking c(m, m+length) to c(m+1, m+length+1)."""
    if case is ONE_TWO:
        w = lift(run(2 * g, 2 * m - 1, 2 * (m + length) + 1), main_chain(g))
    else:
        w = lift(run(2 * g - 2, 2 * m - 3, 2 * (m + length) - 1), subchain(g, 1))
    return w * w


def _shift_run(start: int, stop: int, length: int, g: int, case: LabelingCase) -> TwistWord:
    w = IDENTITY
    for m in range(min(start, stop), max(start, stop)):
        w = _shift_up(m, length, g, case) * w
    return w if stop >= start else w.inverse()


def _to_base(name: CurveName, g: int, case: LabelingCase) -> TwistWord:
    """A word taking a c curve to c(2, 2 + length)."""
    length = c_length(name, g, case)
    if case is ONE_TWO or name.i >= 2:
        return _shift_run(name.i, 2, length, g, case)
    if name.j == 2:
        w = lift(run(2 * g - 2, 1, 5), subchain(g, 2))
        return _shift_run(2, 2, 2, g, case) * w * w
    if name.j < g:
        # slide along A_2 onto c(3, j+1), then back along A_1
        w = lift(run(2 * g - 2, 1, 2 * name.j - 1), subchain(g, 2))
        return _shift_run(3, 2, length, g, case) * w * w
    # c(1,g): rotate the left-end chain, which exchanges the a_1 and a_2 handles
    w = lift(run(6, 1, 5), subchain(g, 3))
    return w * w


def cij_transport_word(i: int, j: int, k: int, l: int, g: int, case: LabelingCase = ONE_TWO) -> TwistWord:
    """A word in the a-curve twists taking c(i,j) to c(k,l)."""
    _check_genus(g, case)
    ci, ck = normalize(c(i, j), g, case), normalize(c(k, l), g, case)
    if ci == ck:
        return IDENTITY
    li, lk = c_length(ci, g, case), c_length(ck, g, case)
    if li != lk:
        raise InvalidInput(f"{ci} and {ck} have different lengths {li} and {lk}")
    if li > g - 1 or (case is THREE and li > g - 2):
        raise InvalidInput(f"no transport for curves of length {li} in genus {g}")
    return _to_base(ck, g, case).inverse() * _to_base(ci, g, case)


# --- heuristic, addition and subtraction ---------------------------------------------------

@dataclass(frozen=True)
class Certificate:
    """word(source) = +-target, so T(target) = word T(source) word^-1."""

    target: CurveName
    source: CurveName
    word: TwistWord
    step: str
    uses: tuple = ()

    def to_json(self) -> dict:
        return {
            "target": str(self.target),
            "source": str(self.source),
            "step": self.step,
            "uses": [str(u) for u in self.uses],
            "length": len(self.word),
            "word": self.word.to_json(),
        }


def _uses(word: TwistWord) -> tuple:
    return tuple(sorted({n for n in word.names() if n.kind not in ("a", "a'")}, key=str))


def auxiliary_pair(length: int, g: int, case: LabelingCase = ONE_TWO) -> tuple:
    """The one-sided pair (k, l) with 2 <= k < l <= g used as the common auxiliary curve."""
    if not 1 <= length <= g - 2:
        raise InvalidInput(f"length {length} outside 1..{g - 2}")
    return 2, 2 + length


def heuristic_word(i: int, j: int, k: int, l: int, have: Sequence, g: int, case: LabelingCase) -> Certificate:
    """
    Given twists in two of {b_i, b_j, c(k,l)} (plus the a-curve twists), a
    certificate for the twist in the third.
    """
    m = _modulus(g)
    length = (b_rep(j, g) - b_rep(i, g)) % m
    ckl = normalize(c(k, l), g, case)
    if length != c_length(ckl, g, case) or not 1 <= length <= g - 2:
        raise InvalidInput(f"c({k},{l}) does not match the pair ({i},{j})")
    pw = pair_words(i, j, g, case)
    h = cij_transport_word(pw.curve.i, pw.curve.j, ckl.i, ckl.j, g, case)
    bi, bj = b(pw.i), b(pw.j)
    have = {normalize(x, g, case) for x in have}
    if have == {bi, ckl}:
        word = pw.forward.substitute(pw.curve, h.inverse(), ckl)
        return Certificate(bj, bi, word, "heuristic:b", _uses(word))
    if have == {bj, ckl}:
        word = pw.forward.substitute(pw.curve, h.inverse(), ckl).inverse()
        return Certificate(bi, bj, word, "heuristic:b", _uses(word))
    if have == {bi, bj}:
        word = h * pw.to_curve
        return Certificate(ckl, bi, word, "heuristic:c", _uses(word))
    raise InvalidInput("have must name two of b_i, b_j, c(k,l)")


def _step_certificates(i: int, x: int, g: int, case: LabelingCase) -> list:
    """Certificates for b_(i+2x) from b_i and b_(i+x); x may be negative."""
    if abs(x) > g - 2:
        raise InvalidInput(f"|x| = {abs(x)} exceeds g-2 = {g - 2}")
    k, l = auxiliary_pair(abs(x), g, case)
    lo, mid = (i, i + x) if x > 0 else (i + x, i)
    # the auxiliary curve from the pair already in hand
    cc = heuristic_word(lo, mid, k, l, [b(b_rep(i, g)), b(b_rep(i + x, g))], g, case)
    # then the new b curve from its neighbour and the auxiliary curve
    a2, b2 = (i + x, i + 2 * x) if x > 0 else (i + 2 * x, i + x)
    cb = heuristic_word(a2, b2, k, l, [b(b_rep(i + x, g)), c(k, l)], g, case)
    word = cb.word.substitute(cc.target, cc.word, cc.source).reduced()
    step = Certificate(cb.target, cb.source, word, "addition" if x > 0 else "subtraction", _uses(word))
    return [cc, step]


def addition_word(i: int, x: int, g: int, case: LabelingCase = ONE_TWO) -> TwistWord:
    """f in <T(b_i), T(b_i+x), a-curve twists> with f(b_i+x) = b_i+2x."""
    if x < 0:
        raise InvalidInput("x must be nonnegative")
    if x == 0:
        return IDENTITY
    return _step_certificates(i, x, g, case)[-1].word


def subtraction_word(i: int, x: int, g: int, case: LabelingCase = ONE_TWO) -> TwistWord:
    """f in <T(b_i+x), T(b_i+2x), a-curve twists> with f(b_i+x) = b_i."""
    if x < 0:
        raise InvalidInput("x must be nonnegative")
    if x == 0:
        return IDENTITY
    return _step_certificates(i + 2 * x, -x, g, case)[-1].word


# --- the cut-surface completion curve -----------------------------------------------

@dataclass(frozen=True)
class ExtraCurve:
    """A curve outside the named alphabet, known through a twist word applied to a named curve."""

    name: str
    source: CurveName
    word: TwistWord
    homology: tuple
    framed: FramedClass

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "source": str(self.source),
            "homology": list(self.homology),
            "framed": self.framed.to_json(),
            "word": self.word.to_json(),
        }


def completion_braid(g: int, r: int) -> BraidWord:
    """
    On the 2g branch points of the main chain: carry the block 5..2r+6 to the
    right end, then bring its two leftmost points round to positions 1, 2.
    """
    n = 2 * g
    slide = block_pass(n, 5, 2 * r + 2, 2 * g - 2 * r - 6)
    wrap = block_pass(n, 1, 2 * g - 2 * r - 2, 2)
    return BraidWord(n, wrap.letters + slide.letters)


def completion_curve(g: int, r: int, case: LabelingCase = ONE_TWO) -> ExtraCurve:
    """
    The extra curve that completes the network cut along b_2 in case OneTwo:
    c(3, 3+r) from b_3 and b_(3+r), then braided along the main chain.
    """
    if case is not ONE_TWO:
        raise UnsupportedCase("the completion curve is only needed in labeling case OneTwo")
    if not 1 <= r < g - 2:
        raise UnsupportedCase(f"r = {r} needs 1 <= r < g-2 = {g - 2}")
    _check_genus(g, case)
    cert = heuristic_word(3, 3 + r, 3, 3 + r, [b(3), b(b_rep(3 + r, g))], g, case)
    word = lift(completion_braid(g, r), main_chain(g)) * cert.word
    h = symplectic_of(word, g, case).dot(np.array(integral_homology(cert.source, g, case), dtype=object))
    x = word.act(framed_class_of(cert.source, g, case), g, case)
    return ExtraCurve(f"c*({3},{3 + r})", cert.source, word, tuple(int(t) for t in h), x)


# --- the Euclidean trace ------------------------------------------------------------

def euclid_steps(a0: int, b0: int) -> tuple:
    """Quotients and remainders of the Euclidean algorithm on (a0, b0), b0 >= a0 > 0."""
    Q, R = [], []
    big, small = b0, a0
    while True:
        q, rem = divmod(big, small)
        Q.append(q)
        R.append(rem)
        if rem == 0:
            return Q, R
        big, small = small, rem


@dataclass
class Stage:
    j: int
    r_j: int
    d_j: int
    k_next: int
    r_next: int
    Q: list
    R: list
    y: list
    y_prime: list
    steps: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "j": self.j,
            "r_j": self.r_j,
            "d_j": self.d_j,
            "k_next": self.k_next,
            "r_next": self.r_next,
            "Q": self.Q,
            "R": self.R,
            "y": self.y,
            "y_prime": self.y_prime,
            "steps": self.steps,
        }


@dataclass
class EuclideanTrace:
    kappa: tuple
    g: int
    spin: Optional[str]
    labeling: LabelingCase
    r: int
    stages: list
    certificates: dict  # b index -> Certificate
    auxiliary: list  # certificates for auxiliary c curves, in order
    initial: list

    @property
    def certified(self) -> list:
        return sorted(set(self.initial) | set(self.certificates))

    def targets(self) -> list:
        m = 2 * self.g - 2
        return sorted({b_rep(3 + p * self.r, self.g) for p in range(m // self.r + 1)})

    def to_json(self, words: bool = True) -> dict:
        out = {
            "kappa": list(self.kappa),
            "genus": self.g,
            "spin": self.spin,
            "labeling": str(self.labeling),
            "r": self.r,
            "initial": self.initial,
            "stages": [s.to_json() for s in self.stages],
            "targets": self.targets(),
            "certified": self.certified,
        }
        if words:
            out["certificates"] = {str(t): cert.to_json() for t, cert in sorted(self.certificates.items())}
            out["auxiliary"] = [cert.to_json() for cert in self.auxiliary]
        return out


def euclidean_trace(kappa: Sequence[int], spin=None, g: int = None) -> EuclideanTrace:
    kap = validate_partition(kappa, g)
    g = genus_of_partition(kap)
    if g < 4:
        raise UnsupportedCase("the Euclidean reduction needs genus at least 4")
    r = kappa_gcd(kap)
    if r in (2 * g - 2, g - 1):
        raise UnsupportedCase(f"r = {r} is excluded for genus {g}: hyperelliptic exclusion")
    if list(kap) != sorted(kap):
        raise InvalidInput("kappa must be listed in increasing order")
    if r % 2 == 0 and spin is None:
        raise InvalidInput("even gcd needs a spin parity")
    case = labeling_case(kap, spin if r % 2 == 0 else None, g)
    spin_name = spin if r % 2 == 0 else None
    if isinstance(spin_name, int):
        spin_name = "odd" if spin_name else "even"
    m = 2 * g - 2

    have = {}  # b index (1..m) -> integer position of first appearance
    initial = []
    partial = 3
    for k in kap:
        partial += k
        t = b_rep(partial, g)
        if t not in initial:
            initial.append(t)
    certificates = {}
    auxiliary = []

    def known(t):
        return b_rep(t, g) in initial or b_rep(t, g) in certificates

    def step(u: int, x: int, log: list):
        """From b_u and b_(u+x), certify b_(u+2x)."""
        t = b_rep(u + 2 * x, g)
        if known(u + 2 * x):
            log.append({"from": [u, u + x], "x": x, "to": u + 2 * x, "index": t, "new": False})
            return
        if not (known(u) and known(u + x)):
            raise InvalidInput(f"internal: b_{u} or b_{u + x} not yet available")  # pragma: no cover
        cc, cert = _step_certificates(u, x, g, case)
        auxiliary.append(cc)
        certificates[t] = cert
        log.append({"from": [u, u + x], "x": x, "to": u + 2 * x, "index": t, "new": True})

    stages = []
    n = len(kap)
    for jj in range(1, n):
        r_j = math.gcd(*kap[:jj]) if jj > 1 else kap[0]
        s_j = sum(kap[:jj])
        d_j = s_j // r_j
        k_next = kap[jj]
        Q, R = euclid_steps(r_j, k_next)
        y0 = 3 + s_j
        y = [y0]
        yp = [3 + s_j + k_next]
        rem = [r_j] + R  # rem[l] is R_l with R_0 = r_j
        for l in range(1, len(Q) + 1):
            sgn = 1 if l % 2 else -1
            y.append(y[l - 1] + sgn * Q[l - 1] * rem[l - 1])
            yp.append(y[l - 1] + sgn * (Q[l - 1] - 1) * rem[l - 1])
        r_next = rem[len(Q) - 1]
        st = Stage(jj, r_j, d_j, k_next, r_next, Q, R, y, yp)
        log = st.steps
        # the arithmetic progression already present at this stage
        for p in range(d_j + 1):
            if not known(3 + p * r_j):
                raise InvalidInput(f"internal: b_{3 + p * r_j} missing at stage {jj}")  # pragma: no cover
        for l in range(1, len(Q) + 1):
            x = rem[l - 1]
            sgn = 1 if l % 2 else -1
            start = y[l - 1] - sgn * x
            for q in range(Q[l - 1]):
                u = start + sgn * q * x
                step(u, sgn * x, log)
        # fill out the progression 3 + p * r_next
        lo_pos, hi_pos = sorted((y[-1], yp[-1]))
        x = r_next
        assert hi_pos - lo_pos == x
        top = 3 + sum(kap[: jj + 1])
        u = lo_pos
        while u + x < top:
            step(u, x, log)
            u += x
        u = hi_pos
        while u - x > 3:
            step(u, -x, log)
            u -= x
        for p in range((top - 3) // r_next + 1):
            if not known(3 + p * r_next):
                raise InvalidInput(f"internal: b_{3 + p * r_next} was not reached")  # pragma: no cover
        stages.append(st)
    return EuclideanTrace(tuple(kap), g, spin_name, case, r, stages, certificates, auxiliary, initial)


def verify_trace(trace: EuclideanTrace, threads: int = 1) -> dict:
    """Check every certificate on framed and integral homology; returns failures and signs."""
    certs = list(trace.auxiliary) + list(trace.certificates.values())

    def check(cert):
        return verify_detail(cert.word, cert.source, cert.target, trace.g, trace.labeling)

    if threads > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(threads) as pool:
            results = list(pool.map(check, certs))
    else:
        results = [check(cert) for cert in certs]
    failures = []
    signs = {}
    for cert, v in zip(certs, results):
        signs[str(cert.target) + "<-" + str(cert.source)] = v.sign
        if not v.ok:
            failures.append(cert.to_json() | {"framed": v.framed, "symplectic": v.symplectic})
    return {"ok": not failures, "failures": failures, "signs": signs, "checked": len(signs)}
