"""Named claim suites behind the command-line verbs.

Every check produces a :class:`Claim` with the observed value, the expected
value and, on failure, a witness made of element keys or numbers.  Reports
contain no volatile data unless timings are requested, so two runs with the
same inputs serialize to identical bytes.
"""

from __future__ import annotations

import json
import logging
import os
import time
from contextlib import contextmanager
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Iterable, Sequence

import numpy as np
from filelock import FileLock

from . import __version__
from .auto import (
    acts_irreducibly,
    burnside_check,
    coset_action_transitive,
    coset_orbit_length,
    decomposition,
    fingerprints,
    induced_on_quotient,
    isomorphism_search,
    max_sp_check,
    power,
    pprime_order_spectrum,
    sigma_t,
)
from .constructions import construct, dihedral, heisenberg, quaternion8, sp_group, su3_sylow, unitriangular
from .ff import multiplicative_order
from .grp import (
    Group,
    center,
    exponent,
    maximal_subgroups_of_center,
    nilpotency_class,
    order_histogram,
    quotient,
    structure_report,
)
from .numth import is_prime, minimal_k, zsigmondy_primes
from .ses import (
    central_functionals,
    commutator_form,
    count_involutions,
    form_nondegenerate,
    is_camina,
    is_semi_extraspecial,
    is_ses_by_forms,
    is_ultraspecial,
    noncentral_centralizers_abelian,
    nonabelian_centralizer_witness,
    semi_extraspecial_report,
    suzuki2_properties,
)

log = logging.getLogger(__name__)

__all__ = [
    "DEFAULT_PARAMS",
    "Claim",
    "VerificationReport",
    "verify_theorem",
    "sp_orders",
    "iso_report",
    "corpus_checks",
    "control_checks",
    "transitivity_equivalence",
    "report_all",
    "default_cache_dir",
]

DEFAULT_PARAMS = [(2, 1), (2, 2), (2, 3), (3, 1), (3, 2), (5, 1), (7, 1)]


def _plain(x):
    """Convert numpy scalars and arrays into JSON-friendly values."""
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    if isinstance(x, np.ndarray):
        return _plain(x.tolist())
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, np.bool_):
        return bool(x)
    return x


@dataclass
class Claim:
    name: str
    passed: bool
    value: Any = None
    expected: Any = None
    witness: Any = None

    def to_json(self) -> dict:
        out = {"claim": self.name, "verdict": "PASS" if self.passed else "FAIL",
               "value": _plain(self.value), "expected": _plain(self.expected)}
        if not self.passed and self.witness is not None:
            out["witness"] = _plain(self.witness)
        return out


def _eq(name: str, value, expected, witness=None) -> Claim:
    return Claim(name, value == expected, value, expected, witness)


class _Timer:
    def __init__(self):
        self.stages: dict[str, float] = {}

    @contextmanager
    def stage(self, name: str):
        t0 = time.perf_counter()
        try:
            yield
        finally:
            self.stages[name] = round((time.perf_counter() - t0) * 1000, 3)


@dataclass
class VerificationReport:
    group_spec: str
    claims: list[Claim] = field(default_factory=list)
    structure: dict = field(default_factory=dict)
    ses: dict = field(default_factory=dict)
    auto: dict = field(default_factory=dict)
    numth: dict = field(default_factory=dict)
    timings: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.claims)

    @property
    def failures(self) -> list[Claim]:
        return [c for c in self.claims if not c.passed]

    def to_json(self, timings: bool = False) -> dict:
        out = {
            "artifact_version": __version__,
            "group_spec": self.group_spec,
            "structure": _plain(self.structure),
            "ses": _plain(self.ses),
            "auto": _plain(self.auto),
            "numth": _plain(self.numth),
            "verdict": {
                "overall": "PASS" if self.passed else "FAIL",
                "claims": [c.to_json() for c in self.claims],
            },
        }
        if timings:
            out["timings"] = self.timings
        return out


# theorem suite ----------------------------------------------------------------

def verify_theorem(p: int, a: int, budget: int | None = None) -> VerificationReport:
    """Run the claim list for G = su3_sylow(p^a) and sigma_t with t primitive."""
    if not is_prime(p) or a < 1:
        raise ValueError(f"need a prime p and a >= 1, got p={p}, a={a}")
    q = p**a
    rep = VerificationReport(f"su3:{q}")
    timer = _Timer()
    add = rep.claims.append

    with timer.stage("construct"):
        G = su3_sylow(q) if budget is None else su3_sylow(q, budget)
    add(_eq("order", G.order, p ** (3 * a)))

    with timer.stage("structure"):
        rep.structure = structure_report(G, p).to_json()
    Z = center(G)

    with timer.stage("ses"):
        sr = semi_extraspecial_report(G)
        b = sr.b
        hyper_expected = (p**b - 1) // (p - 1) if b else 0
        bad = [i for i, f in enumerate(sr.quotient_flags) if not f]
        add(Claim("semi_extraspecial", sr.flag and sr.hyperplanes == hyper_expected,
                  {"flag": sr.flag, "hyperplanes": sr.hyperplanes},
                  {"flag": True, "hyperplanes": hyper_expected},
                  {"failing_hyperplanes": bad} if bad else None))
        forms = is_ses_by_forms(G)
        add(_eq("ses_forms_agree", forms, sr.flag))
        camina = is_camina(G)
        add(_eq("camina_agrees", camina, sr.flag))
        ultra = sr.flag and is_ultraspecial(G)
        add(_eq("ultraspecial", ultra, True, {"center_order": Z.order, "index": G.order // Z.order}))
        rep.ses = dict(sr.to_json(), ultraspecial=ultra, camina=camina, form_based=forms)

    with timer.stage("sigma"):
        F = G.ambient.F
        t = F.gen
        sigma = sigma_t(q, t)
        add(_eq("sigma_order", sigma.order, q * q - 1, {"t": t.code}))
        add(_eq("sigma_order_is_order_of_t", sigma.order, multiplicative_order(t)))

    with timer.stage("decomposition"):
        dec = decomposition(sigma)
        add(_eq("center_order_d", dec.d, q - 1))
        add(_eq("induced_order_c", dec.c, q + 1))
        add(_eq("total_is_c_times_d", dec.total, dec.c * dec.d))
        psi = induced_on_quotient(power(sigma, dec.d), Z)
        bad_forms = [list(k) for k, ok in (psi.preserves_form or {}).items() if not ok]
        add(Claim("induced_symplectic", psi.symplectic is True, psi.symplectic, True,
                  {"functionals_not_preserved": bad_forms}))
        try:
            irreducible = acts_irreducibly(psi)
            add(Claim("induced_irreducible", irreducible, irreducible, True,
                      {"matrix": psi.matrix}))
        except AssertionError as exc:
            irreducible = None
            add(Claim("induced_irreducible", False, None, True, {"disagreement": str(exc)}))
        burnside = burnside_check(sigma)
        add(_eq("burnside", burnside, True))

    with timer.stage("transitivity"):
        orbit = coset_orbit_length(sigma, Z)
        add(_eq("coset_orbit_length", orbit, q * q - 1))

    with timer.stage("exponent"):
        e = exponent(G)
        if p % 2:
            offenders = np.nonzero(G.element_orders > p)[0][:5]
            add(_eq("exponent_p", e, p, {"elements": G.keys[offenders]}))

    with timer.stage("numth"):
        k = minimal_k(q + 1, p)
        add(_eq("minimal_k", k, 2 * a))
        zs = zsigmondy_primes(p, 2 * a)
        stray = [ell for ell in zs.primes if (q + 1) % ell]
        add(Claim("zsigmondy_divide_q_plus_1", not stray, list(zs.primes), None,
                  {"not_dividing": stray}))
        rep.numth = {"zsigmondy": zs.to_json(), "minimal_k": k}

    if p == 2:
        with timer.stage("suzuki"):
            s2 = suzuki2_properties(G)
            add(_eq("noncentral_order_4", s2.common_noncentral_order, 4))
            inv = count_involutions(G)
            add(Claim("involutions_are_center", s2.involutions_all_central and inv == Z.order - 1,
                      inv, Z.order - 1))
            add(_eq("omega_is_center", s2.omega_equals_center, True))
            w = nonabelian_centralizer_witness(G)
            add(Claim("noncentral_centralizers_abelian", w is None, w is None, True,
                      {"element": int(G.keys[w])} if w is not None else None))
            rep.ses["suzuki2"] = dict(s2.to_json(), involutions=inv)

    rep.auto = {
        "sigma": {"t": t.code, "order": sigma.order},
        "decomposition": dec.to_json(),
        "induced": {"matrix": psi.matrix, "order": psi.order, "symplectic": psi.symplectic,
                    "irreducible": irreducible},
        "coset_orbit_length": orbit,
        "burnside": burnside,
        "exponent": e,
    }
    rep.timings = timer.stages
    return rep


# symplectic spectra -------------------------------------------------------------

def default_cache_dir() -> Path:
    env = os.environ.get("SES_LAB_CACHE")
    if env:
        return Path(env)
    base = os.environ.get("XDG_CACHE_HOME") or Path.home() / ".cache"
    return Path(base) / "seslab"


def _spectrum_cached(n: int, p: int, cache_dir: Path | None, threads: int,
                     budget: int | None, force: bool) -> list[int]:
    def compute():
        G = sp_group(n, p) if budget is None else sp_group(n, p, budget)
        return pprime_order_spectrum(G, p, threads=threads)

    if cache_dir is None:
        return compute()
    cache_dir = Path(cache_dir)
    cache_dir.mkdir(parents=True, exist_ok=True)
    path = cache_dir / f"sp_{n}_{p}_v{__version__}.json"
    with FileLock(str(path) + ".lock"):
        if path.exists() and not force:
            data = json.loads(path.read_text())
            if data.get("n") == n and data.get("p") == p and data.get("artifact_version") == __version__:
                log.info("cache hit for Sp(%d, %d) at %s", n, p, path)
                return [int(k) for k in data["spectrum"]]
        spectrum = compute()
        tmp = path.with_suffix(".tmp")
        tmp.write_text(json.dumps({"n": n, "p": p, "artifact_version": __version__,
                                   "spectrum": spectrum}))
        tmp.replace(path)
    return spectrum


def sp_orders(n: int, p: int, cache_dir: Path | None = None, threads: int = 1,
              budget: int | None = None, force: bool = False) -> dict:
    """p'-order spectrum of Sp_n(p) with the matching bound check."""
    if n % 2:
        raise ValueError("symplectic groups need even n")
    spectrum = _spectrum_cached(n, p, cache_dir, threads, budget, force)
    check = max_sp_check(spectrum, p, n // 2)
    claim = Claim(f"max_sp_part{check.part}", check.passed,
                  check.value if check.part != 3 else check.candidates,
                  check.expected if check.part != 3 else f"divisors of {p ** (n // 2) + 1}",
                  {"violations": check.violations} if check.part == 3 else None)
    return {
        "artifact_version": __version__,
        "group_spec": f"sp:{n},{p}",
        "p": p,
        "n": n,
        "spectrum": spectrum,
        "max": max(spectrum),
        "max_sp": check.to_json(),
        "verdict": {"overall": "PASS" if claim.passed else "FAIL", "claims": [claim.to_json()]},
    }


# isomorphism ----------------------------------------------------------------------

def _invariants(G: Group) -> dict:
    fp = fingerprints(G)
    sizes, counts = np.unique(G.order // fp[:, 1], return_counts=True)
    ses = is_semi_extraspecial(G) if G.prime is not None else False
    return {
        "order_histogram": {str(k): v for k, v in order_histogram(G).items()},
        "class_size_profile": {str(int(s)): int(c) for s, c in zip(sizes, counts)},
        "semi_extraspecial": ses,
        "ultraspecial": bool(ses and is_ultraspecial(G)),
    }


def iso_report(spec_a: str, spec_b: str, budget: int = 10**8) -> dict:
    G, H = construct(spec_a), construct(spec_b)
    res = isomorphism_search(G, H, budget=budget)
    out = {"artifact_version": __version__, "groups": [spec_a, spec_b], "budget": budget}
    out.update(res.to_json(G, H))
    if res.status == "exhausted":
        iG, iH = _invariants(G), _invariants(H)
        out["invariants"] = [iG, iH]
        out["invariants_equal"] = iG == iH
    return _plain(out)


# corpus -------------------------------------------------------------------------

def transitivity_equivalence(q: int) -> list[Claim]:
    """For every power of sigma_t: transitive on G/Z - {Z} iff order q^2 - 1."""
    G = su3_sylow(q)
    sigma = sigma_t(q, G.ambient.F.gen)
    Z = center(G)
    mismatches, too_big = [], []
    for s in range(q * q - 1):
        alpha = power(sigma, s)
        transitive = coset_action_transitive(alpha, Z)
        full = alpha.order == q * q - 1
        if transitive != full:
            mismatches.append(s)
        if alpha.order > q * q - 1:
            too_big.append(s)
        if alpha.order % G.prime and not burnside_check(alpha):
            mismatches.append(("burnside", s))
    return [
        Claim(f"transitive_iff_full_order[q={q}]", not mismatches, len(mismatches), 0,
              {"exponents": mismatches}),
        Claim(f"pprime_order_bound[q={q}]", not too_big, len(too_big), 0, {"exponents": too_big}),
    ]


def _form_suite(G: Group, label: str) -> list[Claim]:
    bad = []
    for phi in central_functionals(G):
        try:
            form = commutator_form(G, phi, check=True)
        except (ValueError, AssertionError) as exc:
            bad.append({"functional": list(phi.coeffs), "error": str(exc)})
            continue
        if not (form.is_alternating() and form_nondegenerate(form)):
            bad.append({"functional": list(phi.coeffs), "rank": form.rank()})
    quot = is_semi_extraspecial(G)
    return [
        Claim(f"forms[{label}]", not bad, len(bad), 0, {"bad": bad}),
        _eq(f"ses_quotient_vs_forms[{label}]", is_ses_by_forms(G), quot),
    ]


def _extraspecial_quotients(G: Group) -> list[Group]:
    Z = center(G)
    return [quotient(G, N) for N in maximal_subgroups_of_center(Z, G.prime)]


def corpus_checks(q: int) -> list[Claim]:
    """Camina, form and exponent claims for su3_sylow(q), heisenberg(q) and quotients."""
    claims: list[Claim] = []
    p = su3_sylow(q).prime
    for name, G in (("su3", su3_sylow(q)), ("heis", heisenberg(q))):
        label = f"{name}:{q}"
        members = [(label, G)]
        # extraspecial quotients are many for larger q; the first few suffice
        members += [(f"{label}/N{i}", Q) for i, Q in enumerate(_extraspecial_quotients(G)[:4])]
        for lab, X in members:
            ses = is_semi_extraspecial(X)
            claims.append(_eq(f"camina_equals_ses[{lab}]", is_camina(X), ses))
            claims.append(_eq(f"ses[{lab}]", ses, True))
            claims.extend(_form_suite(X, lab))
        if name == "su3":
            claims.append(_eq(f"exponent[{label}]", exponent(G), p if p % 2 else 4))
            if p == 2:
                s2 = suzuki2_properties(G)
                claims.append(_eq(f"suzuki2[{label}]",
                                  (s2.common_noncentral_order, s2.involutions_all_central,
                                   s2.omega_equals_center, noncentral_centralizers_abelian(G),
                                   count_involutions(G)),
                                  (4, True, True, True, q - 1)))
    if q <= 4:
        claims.extend(transitivity_equivalence(q))
    return claims


def control_checks() -> list[Claim]:
    claims = []
    for label, G in (("D8", dihedral(4)), ("Q8", quaternion8())):
        ses = is_semi_extraspecial(G)
        claims.append(_eq(f"camina_equals_ses[{label}]", is_camina(G), ses))
        claims.append(_eq(f"ses[{label}]", ses, True))
        claims.extend(_form_suite(G, label))
    U = unitriangular(4, 2)
    claims.append(_eq("ses[ut:4,2]", is_semi_extraspecial(U), False))
    claims.append(_eq("class[ut:4,2]", nilpotency_class(U), 3))
    return claims


def _numth_section(p: int, a: int) -> tuple[dict, list[Claim]]:
    zs = zsigmondy_primes(p, 2 * a)
    k = minimal_k(p**a + 1, p)
    stray = [ell for ell in zs.primes if (p**a + 1) % ell]
    claims = [
        _eq(f"minimal_k[{p},{a}]", k, 2 * a),
        Claim(f"zsigmondy_divides[{p},{2 * a}]", not stray, list(zs.primes), None, {"stray": stray}),
    ]
    return {"zsigmondy": zs.to_json(), "minimal_k": k}, claims


def report_all(params: Sequence[tuple[int, int]] | None = None, cache_dir: Path | None = None,
               threads: int = 1, iso_budget: int = 10**8, timings: bool = False) -> dict:
    """Run every suite for each (p, a); the aggregate verdict is PASS iff all claims pass."""
    params = list(DEFAULT_PARAMS if params is None else params)
    results = []
    all_claims: list[Claim] = []
    t0 = time.perf_counter()
    for p, a in params:
        q = p**a
        log.info("report-all: p=%d a=%d", p, a)
        theorem = verify_theorem(p, a)
        entry: dict = {"p": p, "a": a, "theorem": theorem.to_json(timings)}
        all_claims.extend(theorem.claims)
        if (2 * a, p) in _sp_params():
            sp = sp_orders(2 * a, p, cache_dir=cache_dir, threads=threads)
            entry["sp_orders"] = sp
            all_claims.append(Claim(f"sp_orders[{2 * a},{p}]", sp["verdict"]["overall"] == "PASS"))
        entry["numth"], claims = _numth_section(p, a)
        all_claims.extend(claims)
        iso = iso_report(f"su3:{q}", f"heis:{q}", budget=iso_budget)
        entry["iso"] = iso
        expected = "not_isomorphic" if p == 2 else "isomorphic"
        ok = iso["status"] == expected or (p != 2 and iso["status"] == "exhausted"
                                           and iso.get("invariants_equal", False))
        all_claims.append(Claim(f"iso[{q}]", ok, iso["status"], expected))
        corpus = corpus_checks(q)
        entry["corpus"] = [c.to_json() for c in corpus]
        all_claims.extend(corpus)
        results.append(entry)
    out: dict = {"artifact_version": __version__, "params": [list(pa) for pa in params],
                 "results": results}
    if params:
        controls = control_checks()
        out["controls"] = [c.to_json() for c in controls]
        all_claims.extend(controls)
    failures = [c.to_json() for c in all_claims if not c.passed]
    out["verdict"] = {"overall": "PASS" if not failures else "FAIL",
                      "claims": len(all_claims), "failures": failures}
    if timings:
        out["timings"] = {"total_ms": round((time.perf_counter() - t0) * 1000, 3)}
    return _plain(out)


def _sp_params() -> set[tuple[int, int]]:
    from .constructions import SP_WHITELIST
    return SP_WHITELIST
