"""Weight-filtered rational vector spaces.

A WeightedSpace is Q^d with a finite increasing exhaustive filtration
indexed by integers, plus a labeled grading recording which (twisted)
simple constituents make up each graded piece.

Twist convention, fixed once for the whole library: twisting by (d)
lowers every weight by 2d.  A map carrying twist t is a filtration-
preserving morphism exactly when it is filtered with raw shift 2t
against the stored (untwisted) filtrations; all callers go through
the helpers here rather than re-deriving signs.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .qlinalg import QMatrix, Subspace, apply_to_subspace, image, intersect

LABEL_DEFAULT = "pt"


class FiltrationError(ValueError):
    """Steps fail to be nested, strictly increasing, or exhaustive."""


class ShapeMismatch(ValueError):
    """Matrix shape does not match the filtered spaces."""


class NotFiltered(ValueError):
    """A strictness check was asked of a non-filtered map."""


class NotContained(ValueError):
    """The given subspace is not contained in the ambient space."""


class InconsistentGrading(ValueError):
    """Grading multiplicities do not match graded dimensions."""


@dataclass(frozen=True, order=True)
class TwistedLabel:
    label: str
    twist: int = 0

    def twisted(self, d: int) -> "TwistedLabel":
        return TwistedLabel(self.label, self.twist + d)

    def __str__(self) -> str:
        return f"{self.label}({self.twist})"

    @property
    def sort_key(self):
        return (self.label, -self.twist)


@dataclass(frozen=True)
class WeightFiltration:
    ambient_dim: int
    steps: tuple  # tuple of (weight, Subspace), strictly increasing on both

    @staticmethod
    def from_spaces(ambient_dim: int,
                    steps: Iterable[tuple[int, Subspace]]) -> "WeightFiltration":
        items = sorted(steps, key=lambda t: t[0])
        norm: list[tuple[int, Subspace]] = []
        prev = Subspace.zero(ambient_dim)
        for w, s in items:
            if s.ambient_dim != ambient_dim:
                raise FiltrationError("step has wrong ambient dimension")
            if norm and norm[-1][0] == w:
                raise FiltrationError("repeated weight")
            if s == prev:
                continue
            if not s.contains(prev):
                raise FiltrationError("filtration steps are not nested")
            norm.append((w, s))
            prev = s
        if not prev.is_full():
            raise FiltrationError("filtration is not exhaustive")
        return WeightFiltration(ambient_dim, tuple(norm))

    @staticmethod
    def single_step(ambient_dim: int, weight: int) -> "WeightFiltration":
        return WeightFiltration.from_spaces(
            ambient_dim, [(weight, Subspace.full(ambient_dim))])

    def space_at(self, k: int) -> Subspace:
        current = Subspace.zero(self.ambient_dim)
        for w, s in self.steps:
            if w > k:
                break
            current = s
        return current

    @property
    def weights(self) -> tuple:
        return tuple(w for w, _ in self.steps)

    def graded_dim(self, k: int) -> int:
        return self.space_at(k).dim - self.space_at(k - 1).dim

    def graded_dims(self) -> dict:
        return {w: self.graded_dim(w) for w in self.weights}

    def shifted(self, delta: int) -> "WeightFiltration":
        return WeightFiltration(self.ambient_dim,
                                tuple((w + delta, s) for w, s in self.steps))

    def transported(self, p: QMatrix) -> "WeightFiltration":
        """Filtration with every step replaced by its image under invertible p."""
        return WeightFiltration.from_spaces(
            p.rows, [(w, apply_to_subspace(p, s)) for w, s in self.steps])


@dataclass(frozen=True)
class LabeledGrading:
    # tuple of (weight, tuple of (TwistedLabel, multiplicity)), canonically sorted
    entries: tuple

    @staticmethod
    def from_dict(d: Mapping[int, Mapping[TwistedLabel, int]]) -> "LabeledGrading":
        out = []
        for w in sorted(d):
            terms = [(lbl, int(m)) for lbl, m in d[w].items() if m != 0]
            if any(m < 0 for _, m in terms):
                raise InconsistentGrading("negative multiplicity")
            if terms:
                out.append((w, tuple(sorted(terms, key=lambda t: t[0].sort_key))))
        return LabeledGrading(tuple(out))

    @staticmethod
    def empty() -> "LabeledGrading":
        return LabeledGrading(())

    @staticmethod
    def single(weight: int, label: str, mult: int, twist: int = 0) -> "LabeledGrading":
        return LabeledGrading.from_dict({weight: {TwistedLabel(label, twist): mult}})

    def as_dict(self) -> dict:
        return {w: dict(terms) for w, terms in self.entries}

    def at(self, k: int) -> dict:
        for w, terms in self.entries:
            if w == k:
                return dict(terms)
        return {}

    def total_at(self, k: int) -> int:
        return sum(self.at(k).values())

    @property
    def weights(self) -> tuple:
        return tuple(w for w, _ in self.entries)

    def total_dim(self) -> int:
        return sum(m for _, terms in self.entries for _, m in terms)

    def twisted(self, d: int) -> "LabeledGrading":
        return LabeledGrading.from_dict({
            w - 2 * d: {lbl.twisted(d): m for lbl, m in dict(terms).items()}
            for w, terms in self.entries})


def default_grading(filt: WeightFiltration, label: str = LABEL_DEFAULT) -> LabeledGrading:
    return LabeledGrading.from_dict({
        w: {TwistedLabel(label): filt.graded_dim(w)}
        for w in filt.weights if filt.graded_dim(w) > 0})


@dataclass(frozen=True)
class WeightedSpace:
    dim: int
    filtration: WeightFiltration
    grading: LabeledGrading

    def __post_init__(self):
        if self.filtration.ambient_dim != self.dim:
            raise FiltrationError("filtration ambient dimension does not match dim")
        for w in set(self.filtration.weights) | set(self.grading.weights):
            if self.grading.total_at(w) != self.filtration.graded_dim(w):
                raise InconsistentGrading(
                    f"grading multiplicity at weight {w} does not match graded dim")

    @staticmethod
    def from_filtration(filt: WeightFiltration,
                        grading: LabeledGrading | None = None) -> "WeightedSpace":
        if grading is None:
            grading = default_grading(filt)
        return WeightedSpace(filt.ambient_dim, filt, grading)

    @staticmethod
    def pure(dim: int, weight: int, label: str = LABEL_DEFAULT,
             grading: LabeledGrading | None = None) -> "WeightedSpace":
        if dim == 0:
            return WeightedSpace(0, WeightFiltration(0, ()), LabeledGrading.empty())
        filt = WeightFiltration.single_step(dim, weight)
        if grading is None:
            grading = LabeledGrading.single(weight, label, dim)
        return WeightedSpace(dim, filt, grading)

    @staticmethod
    def zero() -> "WeightedSpace":
        return WeightedSpace(0, WeightFiltration(0, ()), LabeledGrading.empty())


@dataclass(frozen=True)
class TwistedMap:
    matrix: QMatrix
    twist: int = 0

    @property
    def morphism_shift(self) -> int:
        """Raw filtration shift of a twist-t morphism against untwisted storage."""
        return 2 * self.twist


@dataclass(frozen=True)
class GradedPiece:
    w_k: Subspace
    w_km1: Subspace
    dim: int


def weight_of_graded_piece(ws: WeightedSpace, k: int) -> GradedPiece:
    wk = ws.filtration.space_at(k)
    wkm1 = ws.filtration.space_at(k - 1)
    return GradedPiece(wk, wkm1, wk.dim - wkm1.dim)


def tate_twist(ws: WeightedSpace, d: int) -> WeightedSpace:
    filt = ws.filtration.shifted(-2 * d)
    return WeightedSpace(ws.dim, filt, ws.grading.twisted(d))


def check_filtered(tm: TwistedMap, dom: WeightedSpace, cod: WeightedSpace,
                   shift: int) -> bool:
    """True iff matrix . W_k(dom) is contained in W_{k+shift}(cod) for all k.

    `shift` is the raw shift against the stored filtrations; a twist-t
    morphism between untwisted storages corresponds to shift 2t.
    """
    m = tm.matrix
    if m.cols != dom.dim or m.rows != cod.dim:
        raise ShapeMismatch("matrix shape does not match the filtered spaces")
    for w, s in dom.filtration.steps:
        if not cod.filtration.space_at(w + shift).contains(apply_to_subspace(m, s)):
            return False
    return True


def check_strict(tm: TwistedMap, dom: WeightedSpace, cod: WeightedSpace,
                 shift: int | None = None) -> bool:
    """Strict compatibility: image(m) \\cap W_{k+shift}(cod) = m(W_k(dom)) for all k."""
    if shift is None:
        shift = tm.morphism_shift
    if not check_filtered(tm, dom, cod, shift):
        raise NotFiltered("map is not filtered with the given shift")
    m = tm.matrix
    img = image(m)
    candidates = set(dom.filtration.weights)
    candidates.update(w - shift for w in cod.filtration.weights)
    for k in sorted(candidates):
        lhs = intersect(img, cod.filtration.space_at(k + shift))
        rhs = apply_to_subspace(m, dom.filtration.space_at(k))
        if lhs != rhs:
            return False
    return True


def weights_at_most(ws: WeightedSpace, n: int) -> bool:
    return all(w <= n for w in ws.filtration.weights)


def weights_at_least(ws: WeightedSpace, n: int) -> bool:
    lowest = Subspace.zero(ws.dim)
    for w, s in ws.filtration.steps:
        if w < n and s != lowest:
            return False
    return True


def is_pure(ws: WeightedSpace, n: int) -> bool:
    return weights_at_most(ws, n) and weights_at_least(ws, n)


def induced_filtration_on_sub(ws: WeightedSpace, s: Subspace) -> WeightFiltration:
    """W_k \\cap s, expressed in the intrinsic coordinates of s's RREF basis."""
    if s.ambient_dim != ws.dim:
        raise NotContained("subspace has wrong ambient dimension")
    if not Subspace.full(ws.dim).contains(s):
        raise NotContained("subspace not contained in ambient")
    steps = []
    for w, wk in ws.filtration.steps:
        meet = intersect(wk, s)
        vecs = [s.coords(v) for v in meet.basis.entries]
        steps.append((w, Subspace.from_vectors(s.dim, vecs)))
    return WeightFiltration.from_spaces(s.dim, steps)


def induced_filtration_on_quotient(ws: WeightedSpace, s: Subspace) -> WeightFiltration:
    """(W_k + s)/s in the canonical complement coordinates of s."""
    if s.ambient_dim != ws.dim:
        raise NotContained("subspace has wrong ambient dimension")
    qdim = ws.dim - s.dim
    piv = set(s.pivots)
    free = [j for j in range(ws.dim) if j not in piv]

    def project(v):
        r = s.reduce_vector(v)
        return tuple(r[j] for j in free)

    steps = []
    for w, wk in ws.filtration.steps:
        vecs = [project(v) for v in wk.basis.entries]
        steps.append((w, Subspace.from_vectors(qdim, vecs)))
    return WeightFiltration.from_spaces(qdim, steps)


def sub_weighted_space(ws: WeightedSpace, s: Subspace,
                       grading: LabeledGrading | None = None) -> WeightedSpace:
    return WeightedSpace.from_filtration(induced_filtration_on_sub(ws, s), grading)


def quotient_weighted_space(ws: WeightedSpace, s: Subspace,
                            grading: LabeledGrading | None = None) -> WeightedSpace:
    return WeightedSpace.from_filtration(induced_filtration_on_quotient(ws, s), grading)
