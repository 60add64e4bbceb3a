"""Gluing quadruples modeling unipotent perverse sheaves on the disk.

A GluingDatum is (psi, phi, can: psi -> phi, var: phi -> psi(-1)) with
N = var . can nilpotent.  The extension functors j_!, j_*, j_!* and the
restrictions i^*, i^! are realized concretely so the exact sequence and
kernel/cokernel identities become subspace computations.

Degree conventions: perverse objects sit in degree 0, i^* lands in
degrees (-1, 0) and i^! in degrees (0, 1).
"""
from __future__ import annotations

from dataclasses import dataclass

from . import qlinalg
from .monodromy import nilpotency_index
from .qlinalg import QMatrix, Subspace, image, kernel
from .report import Report, ReportBuilder
from .weights import (TwistedMap, WeightedSpace, check_filtered, check_strict,
                      induced_filtration_on_quotient, induced_filtration_on_sub,
                      quotient_weighted_space, sub_weighted_space, tate_twist)


@dataclass(frozen=True)
class GluingDatum:
    psi: WeightedSpace
    phi: WeightedSpace
    can: TwistedMap  # psi -> phi, twist 0
    var: TwistedMap  # phi -> psi(-1), twist -1

    def __post_init__(self):
        if self.can.twist != 0 or self.var.twist != -1:
            raise ValueError("can must have twist 0 and var twist -1")
        if self.can.matrix.cols != self.psi.dim or self.can.matrix.rows != self.phi.dim:
            raise ValueError("can has the wrong shape")
        if self.var.matrix.cols != self.phi.dim or self.var.matrix.rows != self.psi.dim:
            raise ValueError("var has the wrong shape")
        comp = self.var.matrix @ self.can.matrix
        nilpotency_index(comp)
        if not check_filtered(self.can, self.psi, self.phi, 0):
            raise ValueError("can is not filtered")
        if not check_filtered(self.var, self.phi, self.psi, -2):
            raise ValueError("var is not filtered")

    def monodromy_matrix(self) -> QMatrix:
        return self.var.matrix @ self.can.matrix


@dataclass(frozen=True)
class PsiData:
    """The nearby-cycles presentation extracted from a gluing datum."""
    space: WeightedSpace
    N: TwistedMap


def psi_u(g: GluingDatum) -> PsiData:
    return PsiData(g.psi, TwistedMap(g.monodromy_matrix(), -1))


def _require_nilpotent_filtered(V: WeightedSpace, N: TwistedMap) -> None:
    if N.twist != -1:
        raise ValueError("monodromy operator must carry twist -1")
    nilpotency_index(N.matrix)
    if not check_filtered(N, V, V, -2):
        raise ValueError("N does not shift the filtration by -2")


def j_lower_shriek(V: WeightedSpace, N: TwistedMap) -> GluingDatum:
    """j_! presentation: (V, V, id, N)."""
    _require_nilpotent_filtered(V, N)
    return GluingDatum(V, V, TwistedMap(QMatrix.identity(V.dim), 0),
                       TwistedMap(N.matrix, -1))


def j_lower_star(V: WeightedSpace, N: TwistedMap) -> GluingDatum:
    """j_* presentation: (V, V(-1), N, id)."""
    _require_nilpotent_filtered(V, N)
    return GluingDatum(V, tate_twist(V, -1), TwistedMap(N.matrix, 0),
                       TwistedMap(QMatrix.identity(V.dim), -1))


def j_intermediate(V: WeightedSpace, N: TwistedMap) -> GluingDatum:
    """j_!* presentation: phi = im(N) inside V(-1), can = N corestricted,
    var = the inclusion."""
    _require_nilpotent_filtered(V, N)
    img = image(N.matrix)
    twisted = tate_twist(V, -1)
    phi = sub_weighted_space(twisted, img)
    can_cols = [img.coords(N.matrix.col(j)) for j in range(V.dim)]
    can = QMatrix.from_rows(
        [[can_cols[j][i] for j in range(V.dim)] for i in range(img.dim)],
        cols=V.dim)
    var = QMatrix.from_rows(
        [[row[i] for row in img.basis.entries] for i in range(V.dim)],
        cols=img.dim)
    return GluingDatum(V, phi, TwistedMap(can, 0), TwistedMap(var, -1))


@dataclass(frozen=True)
class TwoTermComplex:
    """A complex [dom --d--> cod] concentrated in degrees (deg_low, deg_low+1)."""
    deg_low: int
    dom: WeightedSpace
    cod: WeightedSpace
    d: TwistedMap

    def h_low_space(self) -> Subspace:
        return kernel(self.d.matrix)

    def h_low(self) -> WeightedSpace:
        """ker(d) with the induced filtration, in its intrinsic coordinates."""
        ker = self.h_low_space()
        if ker.is_zero():
            return WeightedSpace.zero()
        return sub_weighted_space(self.dom, ker)

    def h_high_denominator(self) -> Subspace:
        return image(self.d.matrix)

    def h_high(self) -> WeightedSpace:
        """coker(d) with the quotient filtration, in complement coordinates."""
        img = self.h_high_denominator()
        if img.is_full():
            return WeightedSpace.zero()
        return quotient_weighted_space(self.cod, img)


def i_upper_star(g: GluingDatum) -> TwoTermComplex:
    """[psi --can--> phi] in degrees (-1, 0)."""
    return TwoTermComplex(-1, g.psi, g.phi, g.can)


def i_upper_shriek(g: GluingDatum) -> TwoTermComplex:
    """[phi --var--> psi(-1)] in degrees (0, 1)."""
    return TwoTermComplex(0, g.phi, tate_twist(g.psi, -1),
                          TwistedMap(g.var.matrix, 0))


def verify_sequence_2(V: WeightedSpace, N: TwistedMap) -> Report:
    """Exactness of 0 -> ker N -> V --N--> V(-1) -> coker N -> 0, built from j_*.

    The outer terms are the perverse cohomologies of the restriction of the
    open pushforward to the origin; exactness at each slot is checked by
    subspace equality and the structural maps are checked to be strict.
    """
    _require_nilpotent_filtered(V, N)
    g = j_lower_star(V, N)
    cx = i_upper_star(g)  # [V --N--> V(-1)]
    rb = ReportBuilder("exact sequence around N")
    d = V.dim
    ker = cx.h_low_space()
    img = cx.h_high_denominator()
    incl = QMatrix.from_rows(
        [[row[i] for row in ker.basis.entries] for i in range(d)],
        cols=ker.dim)
    proj = qlinalg.quotient_projection(img)

    rb.check("left exactness: inclusion of ker N is injective",
             kernel(incl).is_zero() if ker.dim else True)
    rb.check("exactness at the nearby-cycles slot: image = ker N",
             image(incl) == ker)
    rb.check("exactness at the twisted slot: im N = ker of projection",
             img == kernel(proj))
    rb.check("right exactness: projection onto coker N is surjective",
             image(proj).is_full() or proj.rows == 0)
    rb.check("dims: dim ker N + rank N = dim", ker.dim + img.dim == d)

    ker_ws = cx.h_low()
    coker_ws = cx.h_high()
    ok = True
    if ker.dim:
        ok = ok and check_strict(TwistedMap(incl, 0), ker_ws, V, shift=0)
    ok = ok and check_strict(TwistedMap(N.matrix, 0), V, cx.cod, shift=0)
    if coker_ws.dim:
        ok = ok and check_strict(TwistedMap(proj, 0), cx.cod, coker_ws, shift=0)
    rb.check("all structural maps are strict", ok)
    rb.note(f"term dims: {ker.dim}, {d}, {d}, {d - img.dim}")
    return rb.build()


def verify_prop_2_3(V: WeightedSpace, N: TwistedMap) -> Report:
    """Kernel/cokernel identities for the intermediate extension.

    H^{-1} of the *-restriction of j_!* equals ker N, H^1 of the
    !-restriction equals coker N (as canonical subquotients of V with the
    induced filtrations and twists), and the complementary cohomologies
    vanish.
    """
    _require_nilpotent_filtered(V, N)
    g = j_intermediate(V, N)
    rb = ReportBuilder("intermediate-extension kernel/cokernel identities")
    istar = i_upper_star(g)
    ishk = i_upper_shriek(g)
    ker_n = kernel(N.matrix)
    im_n = image(N.matrix)

    rb.check("(i) H^{-1}(i^* j_!*) = ker N as subspaces of V",
             istar.h_low_space() == ker_n)
    rb.check("(i) complementary vanishing: H^0(i^* j_!*) = 0",
             istar.h_high_denominator().is_full())
    if not ker_n.is_zero():
        lhs = induced_filtration_on_sub(istar.dom, istar.h_low_space())
        rhs = induced_filtration_on_sub(V, ker_n)
        rb.check("(i) induced filtrations agree", lhs == rhs)

    rb.check("(ii) complementary vanishing: H^0(i^! j_!*) = 0",
             ishk.h_low_space().is_zero())
    rb.check("(ii) H^1(i^! j_!*) = coker N as quotients of V(-1)",
             ishk.h_high_denominator() == im_n)
    if not im_n.is_full():
        twisted = tate_twist(V, -1)
        lhs = induced_filtration_on_quotient(ishk.cod, ishk.h_high_denominator())
        rhs = induced_filtration_on_quotient(twisted, im_n)
        rb.check("(ii) quotient filtrations agree (with the twist)", lhs == rhs)
    return rb.build()


def verify_roundtrip(V: WeightedSpace, N: TwistedMap) -> Report:
    """psi_u of each of j_!, j_*, j_!* returns (V, N) back."""
    rb = ReportBuilder("extension round-trips")
    for name, ctor in (("j_!", j_lower_shriek), ("j_*", j_lower_star),
                       ("j_!*", j_intermediate)):
        p = psi_u(ctor(V, N))
        rb.check(f"psi_u . {name} = id",
                 p.space == V and p.N.matrix == N.matrix)
    return rb.build()
