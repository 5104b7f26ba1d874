"""Structural predicates for class-2 p-groups.

Special, extraspecial, semi-extraspecial (every quotient by a hyperplane of
the center is extraspecial), ultraspecial and Camina tests, the commutator
form attached to a linear functional on the center, and a few element
counts (involutions, power map, centralizers).

Characters of the elementary abelian center are modelled by GF(p)-linear
functionals, so commutator forms take values in GF(p).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from . import linalg
from .grp import (
    ElementaryAbelianCoords,
    Group,
    Subgroup,
    agemo,
    center,
    centralizer,
    derived_subgroup,
    elementary_abelian_coords,
    frattini,
    hyperplane_functionals,
    is_abelian,
    maximal_subgroups_of_center,
    nilpotency_class,
    omega,
    quotient,
)

log = logging.getLogger(__name__)

__all__ = [
    "CentralFunctional",
    "CommutatorForm",
    "QuotientCoordinates",
    "SESReport",
    "PowerMapReport",
    "Suzuki2Report",
    "is_special",
    "is_extraspecial",
    "is_semi_extraspecial",
    "semi_extraspecial_report",
    "is_ultraspecial",
    "is_camina",
    "central_functionals",
    "quotient_coordinates",
    "commutator_form",
    "form_nondegenerate",
    "is_ses_by_forms",
    "power_map_check",
    "count_involutions",
    "suzuki2_properties",
    "noncentral_centralizers_abelian",
]


def _p(G: Group) -> int:
    p = G.prime
    if p is None:
        raise ValueError(f"{G!r} is not a p-group")
    return p


def is_special(G: Group) -> bool:
    if G.order == 1:
        return False
    p = _p(G)
    if is_abelian(G):
        return bool(np.all(p % G.element_orders == 0))
    Z, D, Phi = center(G), derived_subgroup(G), frattini(G, p)
    return D == Z and Z == Phi and D.issubset(Z)


def is_extraspecial(G: Group) -> bool:
    if G.order == 1 or is_abelian(G):
        return False
    p = _p(G)
    return is_special(G) and center(G).order == p and derived_subgroup(G).order == p


@dataclass
class SESReport:
    flag: bool
    a: int | None = None
    b: int | None = None
    hyperplanes: int = 0
    quotient_flags: list[bool] = field(default_factory=list)
    diagnostic: str = ""

    def to_json(self) -> dict:
        return {"semi_extraspecial": self.flag, "a": self.a, "b": self.b,
                "hyperplanes": self.hyperplanes, "quotients_extraspecial": self.quotient_flags,
                "diagnostic": self.diagnostic}


def semi_extraspecial_report(G: Group) -> SESReport:
    """Quotient-based test: G/N extraspecial for every maximal N < Z(G)."""
    def compute():
        if G.order == 1 or G.prime is None:
            return SESReport(False, diagnostic="not a nontrivial p-group")
        if is_abelian(G):
            return SESReport(False, diagnostic="abelian")
        p = _p(G)
        Z = center(G)
        try:
            Ns = maximal_subgroups_of_center(Z, p)
        except ValueError as exc:
            return SESReport(False, diagnostic=f"center not elementary abelian: {exc}")
        flags = [is_extraspecial(quotient(G, N)) for N in Ns]
        b = _logp(Z.order, p)
        idx = _logp(G.order // Z.order, p)
        rep = SESReport(all(flags), a=idx // 2 if idx % 2 == 0 else None, b=b,
                        hyperplanes=len(Ns), quotient_flags=flags)
        if not rep.flag:
            rep.diagnostic = f"{flags.count(False)} of {len(flags)} quotients not extraspecial"
        return rep
    return G.cached("ses_report", compute)


def _logp(n: int, p: int) -> int:
    k = 0
    while n > 1:
        n, r = divmod(n, p)
        if r:
            raise ValueError("not a power of p")
        k += 1
    return k


def is_semi_extraspecial(G: Group) -> bool:
    rep = semi_extraspecial_report(G)
    if not rep.flag and rep.diagnostic:
        log.debug("%s not S.E.S.: %s", G.label, rep.diagnostic)
    return rep.flag


def is_ultraspecial(G: Group) -> bool:
    rep = semi_extraspecial_report(G)
    if not rep.flag:
        raise ValueError(f"{G.label} is not semi-extraspecial; a and b are undefined")
    return rep.a == rep.b


def is_camina(G: Group) -> bool:
    """Every g outside G' is conjugate to every element of gG'.

    Abelian groups are rejected (False) rather than vacuously accepted.
    """
    if is_abelian(G):
        log.debug("%s is abelian; Camina test returns False by convention", G.label)
        return False
    D = derived_subgroup(G)
    outside = np.nonzero(~D.mask())[0]
    inv = G.inv
    all_ = G.all
    for g in outside:
        cls = np.zeros(G.order, dtype=bool)
        cls[G.mul(G.mul(inv, g), all_)] = True
        if not np.all(cls[G.mul(g, D.members)]):
            return False
    return True


# forms ----------------------------------------------------------------------

@dataclass(frozen=True)
class CentralFunctional:
    """Nonzero linear functional on Z(G) = GF(p)^b in a fixed basis."""

    coords: ElementaryAbelianCoords = field(repr=False, compare=False)
    coeffs: tuple[int, ...]

    def __post_init__(self):
        if not any(c % self.coords.p for c in self.coeffs):
            raise ValueError("zero functional")

    def __call__(self, z: int) -> int:
        v = self.coords.vector(z)
        return sum(a * c for a, c in zip(self.coeffs, v)) % self.coords.p

    def kernel(self) -> list[int]:
        return sorted(z for z in self.coords.coords if self(z) == 0)


def central_functionals(G: Group) -> list[CentralFunctional]:
    """One functional per hyperplane of Z(G), normalized first nonzero = 1."""
    p = _p(G)
    co = G.cached("center_coords", lambda: elementary_abelian_coords(center(G), p))
    return [CentralFunctional(co, f) for f in hyperplane_functionals(co.dim, p)]


@dataclass
class QuotientCoordinates:
    """Fixed GF(p)-basis of an elementary abelian quotient G/N."""

    group: Group
    modulus: Subgroup
    quotient: Group
    coords: ElementaryAbelianCoords
    basis: list[int]  # representatives in G

    @property
    def dim(self) -> int:
        return self.coords.dim

    def vector(self, g) -> np.ndarray:
        proj = self.quotient.projection
        return np.array(self.coords.vector(int(proj[g])), dtype=np.int64)

    def vectors(self, gs) -> np.ndarray:
        proj = self.quotient.projection
        return np.array([self.coords.vector(int(proj[g])) for g in np.atleast_1d(gs)],
                        dtype=np.int64).reshape(-1, self.dim)

    def lift(self, v) -> int:
        """Least-index representative of the coset with coordinates v."""
        return int(self.quotient.representatives[self.coords.element(v)])


def quotient_coordinates(G: Group, N: Subgroup) -> QuotientCoordinates:
    p = _p(G)

    def compute():
        Q = quotient(G, N)
        co = elementary_abelian_coords(Subgroup(Q, Q.all), p)
        basis = [int(Q.representatives[b]) for b in co.basis]
        return QuotientCoordinates(G, N, Q, co, basis)
    return G.cached(("qcoords", N.members.tobytes()), compute)


@dataclass
class CommutatorForm:
    functional: CentralFunctional
    gram: np.ndarray
    basis_cosets: list[int]
    p: int

    def value(self, u, v) -> int:
        return int(np.asarray(u) @ self.gram @ np.asarray(v) % self.p)

    def is_alternating(self) -> bool:
        g = self.gram
        return bool(np.all(np.diag(g) == 0) and np.all((g + g.T) % self.p == 0))

    def rank(self) -> int:
        return linalg.rank(self.gram, self.p)


def commutator_form(G: Group, phi: CentralFunctional, check: bool = True,
                    sample: int = 20_000, seed: int = 0) -> CommutatorForm:
    """Gram matrix of ``(xZ, yZ) -> phi([x, y])`` on G/Z(G).

    ``check`` verifies well-definedness on perturbed representatives and
    bilinearity against every coset pair (|G/Z| <= 81) or a random sample.
    """
    p = _p(G)
    Z = center(G)
    D = derived_subgroup(G)
    if not D.issubset(Z):
        raise ValueError("G' is not central; the commutator form is undefined")
    qc = quotient_coordinates(G, Z)
    B = np.array(qc.basis, dtype=np.int64)
    n = len(B)
    if n == 0:
        return CommutatorForm(phi, np.zeros((0, 0), dtype=np.int64), [], p)
    comm = G.commutator(B[:, None], B[None, :])
    phi_of = np.vectorize(phi, otypes=[np.int64])
    gram = phi_of(comm)
    form = CommutatorForm(phi, gram, [int(b) for b in B], p)
    if check:
        if not form.is_alternating():
            raise AssertionError("commutator form is not alternating")
        rng = np.random.default_rng(seed)
        # well-defined: shifting representatives by central elements changes nothing
        zs = rng.choice(Z.members, size=min(Z.order, 8), replace=False)
        for z in zs:
            shifted = G.commutator(G.mul(B, z)[:, None], B[None, :])
            if not np.array_equal(phi_of(shifted), gram):
                raise AssertionError("commutator form depends on coset representatives")
        Q = qc.quotient
        if Q.order <= 81:
            X = qc.quotient.representatives
            xs, ys = np.meshgrid(X, X, indexing="ij")
            xs, ys = xs.ravel(), ys.ravel()
        else:
            all_ = G.all
            xs = rng.choice(all_, size=sample)
            ys = rng.choice(all_, size=sample)
        lhs = phi_of(G.commutator(xs, ys))
        U, V = qc.vectors(xs), qc.vectors(ys)
        rhs = np.einsum("ij,jk,ik->i", U, gram, V) % p
        if not np.array_equal(lhs, rhs):
            raise AssertionError("commutator form is not bilinear")
    return form


def form_nondegenerate(F: CommutatorForm) -> bool:
    n = F.gram.shape[0]
    return n > 0 and F.rank() == n


def is_ses_by_forms(G: Group) -> bool:
    """Form-based test: class 2 special with every form nondegenerate."""
    if G.order == 1 or G.prime is None or is_abelian(G):
        return False
    if not is_special(G):
        return False
    try:
        fs = central_functionals(G)
    except ValueError:
        return False
    return all(form_nondegenerate(commutator_form(G, phi)) for phi in fs)


# element statistics -----------------------------------------------------------

@dataclass
class PowerMapReport:
    well_defined: bool
    homomorphism: bool
    trivial: bool
    kernel_is_omega: bool
    image_is_agemo: bool
    index_omega: int
    agemo_order: int

    @property
    def ok(self) -> bool:
        return (self.well_defined and self.homomorphism and self.kernel_is_omega
                and self.image_is_agemo and self.index_omega == self.agemo_order)


def power_map_check(G: Group) -> PowerMapReport:
    """Check the map xZ -> x^p on an odd-p class-2 group with G/Z, Z of exponent p."""
    p = _p(G)
    if p == 2:
        raise ValueError("power map check needs odd p")
    Z = center(G)
    if nilpotency_class(G) != 2:
        raise ValueError("group is not of class 2")
    zm = Z.mask()
    powers = G.power(G.all, p)
    if not np.all(zm[powers]) or not np.all(p % G.element_orders[Z.members] == 0):
        raise ValueError("G/Z or Z is not of exponent p")
    qc = quotient_coordinates(G, Z)
    proj = qc.quotient.projection
    rep_power = powers[qc.quotient.representatives][proj]  # power of the coset rep
    well_defined = bool(np.array_equal(rep_power, powers))
    # homomorphism on all pairs: (xy)^p == x^p y^p
    a = G.all
    xy = G.mul(a[:, None], a[None, :])
    homomorphism = bool(np.array_equal(powers[xy], G.mul(powers[:, None], powers[None, :])))
    Om, Ag = omega(G, p), agemo(G, p)
    kernel = np.nonzero(powers == 0)[0]
    image = np.unique(powers)
    return PowerMapReport(
        well_defined=well_defined,
        homomorphism=homomorphism,
        trivial=bool(np.all(powers == 0)),
        kernel_is_omega=bool(np.array_equal(kernel, Om.members)),
        image_is_agemo=bool(np.array_equal(image, Ag.members)),
        index_omega=G.order // Om.order,
        agemo_order=Ag.order,
    )


def count_involutions(G: Group) -> int:
    if G.order % 2:
        log.debug("%s has odd order; no involutions", G.label)
        return 0
    return int(np.count_nonzero(G.element_orders == 2))


@dataclass
class Suzuki2Report:
    common_noncentral_order: int | None
    involutions_all_central: bool
    omega_equals_center: bool

    def to_json(self) -> dict:
        return dict(self.__dict__)


def suzuki2_properties(G: Group) -> Suzuki2Report:
    if _p(G) != 2:
        raise ValueError("Suzuki 2-group checks need a 2-group")
    Z = center(G)
    zm = Z.mask()
    orders = G.element_orders
    outside = np.unique(orders[~zm])
    invol = orders == 2
    return Suzuki2Report(
        common_noncentral_order=int(outside[0]) if outside.size == 1 else None,
        involutions_all_central=bool(np.all(zm[invol])),
        omega_equals_center=omega(G, 2) == Z,
    )


def noncentral_centralizers_abelian(G: Group) -> bool:
    zm = center(G).mask()
    a = G.all
    commute = G.mul(a[:, None], a[None, :]) == G.mul(a[None, :], a[:, None])
    for g in np.nonzero(~zm)[0]:
        C = np.nonzero(commute[g])[0]
        if not np.all(commute[np.ix_(C, C)]):
            return False
    return True


def nonabelian_centralizer_witness(G: Group) -> int | None:
    """A noncentral element with nonabelian centralizer, or None."""
    zm = center(G).mask()
    for g in np.nonzero(~zm)[0]:
        C = centralizer(G, int(g)).members
        if not np.all(G.mul(C[:, None], C[None, :]) == G.mul(C[None, :], C[:, None])):
            return int(g)
    return None
