"""Verification driver: run the whole pipeline for one Cartan type and cross-check it.

Every check returns ``(passed, detail)``.  A check that raises counts as a
failure with the exception text as detail, so one broken invariant never hides
the others.
"""
from __future__ import annotations

import itertools
import random
import time
from dataclasses import asdict, dataclass, field

from .absolute_order import (
    CoxeterContext,
    GroupElement,
    build_context,
    leq_abs,
    positive_roots_below,
)
from .cluster_complex import (
    LEFT,
    RIGHT,
    epsilon_roots,
    face_roots,
    first_facet,
    is_face,
    is_face_pairwise,
    last_facet,
    phi_preimage,
    reduced_euler_characteristic,
    shelling_order,
    sub_simple_system,
    vertex_types,
    zeta_roots,
)
from .ncp_lattice import (
    catalan_number,
    count_nonperipheral_by_rank,
    enumerate_ncp,
    full_support_reflection_count,
    peripheral_by_support,
)
from .root_system import build_root_system, is_positive, parse_cartan_type

FLAG_SAMPLES = 100_000
# property suites that enumerate all instances only run up to this rank
SMALL_RANK = 4
EXHAUSTIVE_FLAG_RANK = 3

CRITERIA = {
    1: "catalan counts",
    2: "h-vector of Delta equals rank counts",
    3: "shelling consistency",
    4: "phi is a bijection",
    5: "positive part",
    6: "full-support reflections",
    7: "mu property suite",
    8: "Euler characteristics",
    9: "flagness",
}


@dataclass
class Check:
    name: str
    criterion: int  # 0 for structural checks outside the numbered list
    passed: bool
    detail: str = ""


@dataclass
class VerificationReport:
    cartan_type: str
    catalan: int = 0
    rank_counts: list = field(default_factory=list)
    h_delta: list = field(default_factory=list)
    h_positive: list = field(default_factory=list)
    nonperipheral_by_rank: list = field(default_factory=list)
    facet_count_delta: int = 0
    facet_count_positive: int = 0
    checks: list = field(default_factory=list)
    timing: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return bool(self.checks) and all(c.passed for c in self.checks)

    def failed_checks(self) -> list:
        return [c for c in self.checks if not c.passed]

    def criteria_status(self) -> dict:
        """criterion -> all its checks passed (only criteria that were run)."""
        out = {}
        for c in self.checks:
            if c.criterion:
                out[c.criterion] = out.get(c.criterion, True) and c.passed
        return out

    def to_dict(self) -> dict:
        d = {"schema": 1}
        d.update(asdict(self))
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "VerificationReport":
        if d.get("schema") != 1:
            raise ValueError(f"unknown report schema {d.get('schema')!r}")
        d = {k: v for k, v in d.items() if k != "schema"}
        d["checks"] = [Check(**c) for c in d.get("checks", [])]
        return cls(**d)


class _Timer:
    def __init__(self, timing: dict):
        self.timing = timing

    def phase(self, name):
        timer = self

        class _Phase:
            def __enter__(self):
                self.t0 = time.perf_counter()

            def __exit__(self, *exc):
                ms = (time.perf_counter() - self.t0) * 1000.0
                timer.timing[name] = round(timer.timing.get(name, 0.0) + ms, 3)
                return False

        return _Phase()


def _run(report: VerificationReport, name: str, criterion: int, fn) -> bool:
    try:
        ok, detail = fn()
    except Exception as exc:  # a crashing check is a failing check
        ok, detail = False, f"{type(exc).__name__}: {exc}"
    report.checks.append(Check(name, criterion, bool(ok), detail))
    return bool(ok)


def _neg(v) -> tuple:
    return tuple(-x for x in v)


# ---------------------------------------------------------------- mu property suite

class _Tally:
    """Counts instances and remembers the first counterexample."""

    def __init__(self):
        self.count = 0
        self.bad = None

    def __call__(self, ok: bool, what):
        self.count += 1
        if not ok and self.bad is None:
            self.bad = what() if callable(what) else what

    def result(self, label: str):
        if self.bad is not None:
            return False, f"{label}: counterexample {self.bad}"
        return True, f"{self.count} instances"


def _roots_below(ctx: CoxeterContext, w: GroupElement) -> list:
    """All roots (both signs) whose reflection is below w."""
    pos = positive_roots_below(ctx, w)
    return pos + [_neg(r) for r in pos]


def _rho_extended(ctx: CoxeterContext, j: int) -> tuple:
    """rho_j for any j >= 1, using gamma(rho_i) = rho_{i+n}."""
    if j <= ctx.hi:
        return ctx.root(j)
    return ctx.gamma(_rho_extended(ctx, j - ctx.n))


def mu_edge_criterion(ctx: CoxeterContext) -> tuple:
    """For nonparallel roots: R(s)R(t) <= gamma iff B(mu(s), t) = 0."""
    tally = _Tally()
    roots = ctx.rs.roots
    g = ctx.gamma
    for s in roots:
        rs_ = ctx.reflection(s)
        for t in roots:
            if t == s or t == _neg(s):
                continue
            below = leq_abs(rs_ * ctx.reflection(t), g)
            tally(below == (ctx.mu_dot(s, t) == 0), (s, t))
    return tally.result("edge criterion")


def mu_fixed_space(ctx: CoxeterContext) -> tuple:
    """mu(t) is fixed by R(t)gamma and B(mu(t), t) = B(t, t)."""
    tally = _Tally()
    for t in ctx.rs.positive_roots:
        m = ctx.mu(t)
        rg = (ctx.reflection(t) * ctx.gamma).matrix
        tally(rg @ m == m, ("fixed", t))
        tally(ctx.mu_dot(t, t) == ctx.rs.inner(t, t), ("normalization", t))
    return tally.result("fixed space")


def mu_lattice_identities(ctx: CoxeterContext, elements) -> tuple:
    """Identities quantified over w <= gamma and roots below w.

    * w(mu(t)) = mu(t) - 2t
    * w(mu(s)).t = -mu(t).s,  w(mu(s)).t = mu(w(s)).t,  mu(w(s)).w(t) = mu(s).t
    * R(p) <= w with p, w(p) positive gives p < w(p); p in Omega gives w(p) negative;
      w(rho_i) avoids rho_{i+1} .. rho_{i+n-1}
    """
    tally = _Tally()
    inner = ctx.rs.inner
    for w in elements:
        if w.is_identity():
            continue
        wm = w.matrix
        below = _roots_below(ctx, w)
        mus = {t: ctx.mu(t) for t in below}
        wmus = {t: wm @ mus[t] for t in below}
        for t in below:
            tally(wmus[t] == tuple(m - 2 * x for m, x in zip(mus[t], t)), ("shift", t))
        for s in below:
            ws = w(s)
            for t in below:
                lhs = inner(wmus[s], t)
                tally(lhs == -ctx.mu_dot(t, s), ("transport i", s, t))
                tally(lhs == ctx.mu_dot(ws, t), ("transport ii", s, t))
                tally(ctx.mu_dot(ws, w(t)) == ctx.mu_dot(s, t), ("transport iii", s, t))
        for p in positive_roots_below(ctx, w):
            wp = w(p)
            i = ctx.index(p)
            if is_positive(wp):
                tally(ctx.index(wp) > i, ("progression", p))
            if ctx.is_omega(p):
                tally(not is_positive(wp), ("omega sent negative", p))
            ahead = {_rho_extended(ctx, j) for j in range(i + 1, i + ctx.n)}
            tally(wp not in ahead, ("no short step", p))
    return tally.result("lattice identities")


def mu_order_signs(ctx: CoxeterContext) -> tuple:
    """Sign patterns of B(mu(rho_i), rho_j) and of B(t, p) on edges."""
    tally = _Tally()
    N = ctx.N
    for i in range(1, N + 1):
        for j in range(i + 1, N + 1):
            ri, rj = ctx.root(i), ctx.root(j)
            tally(ctx.mu_dot(ri, rj) >= 0, ("mu(rho_i).rho_j", i, j))
            tally(ctx.mu_dot(rj, ri) <= 0, ("mu(rho_j).rho_i", i, j))
    g = ctx.gamma
    for i in range(1, N + 1):
        for j in range(1, N + 1):
            if i == j:
                continue
            t, p = ctx.root(i), ctx.root(j)
            if not leq_abs(ctx.refl_at(i) * ctx.refl_at(j), g):
                continue
            b = ctx.rs.inner(t, p)
            tally(b <= 0 if i < j else b >= 0, ("edge sign", i, j))
    return tally.result("order signs")


def mu_simple_system_duality(ctx: CoxeterContext, elements) -> tuple:
    """Duality of eps/zeta with Pi(w), and the sign tests for first/last facets."""
    tally = _Tally()
    inner = ctx.rs.inner
    for w in elements:
        if w.is_identity():
            continue
        handle = sub_simple_system(ctx, w)
        deltas = [ctx.root(i) for i in handle.simple_system]
        eps = epsilon_roots(ctx, w, handle)
        zeta = zeta_roots(ctx, w, handle)
        k = len(deltas)
        for a in range(k):
            for b in range(k):
                want = inner(deltas[a], deltas[a]) if a == b else 0
                tally(ctx.mu_dot(eps[a], deltas[b]) == want, ("mu(eps).delta", a, b))
                tally(ctx.mu_dot(deltas[a], zeta[b]) == want, ("mu(delta).zeta", a, b))
        pool = positive_roots_below(ctx, w)
        for a in range(k):
            for t in pool:
                tally(ctx.mu_dot(eps[a], t) >= 0, ("mu(eps).t", a, t))
                tally(ctx.mu_dot(t, zeta[a]) >= 0, ("mu(t).zeta", a, t))
        first = set(face_roots(ctx, first_facet(ctx, w)))
        last = set(face_roots(ctx, last_facet(ctx, w)))
        winv = w.inverse()
        for t in pool:
            tally((t in first) == (not is_positive(winv(t))), ("first facet sign", t))
            tally((t in last) == (not is_positive(w(t))), ("last facet sign", t))
    return tally.result("simple system duality")


def mu_wall_duality(ctx: CoxeterContext, elements) -> tuple:
    """On every facet of X(w): B(mu(eta_i), t_j) and B(mu(t_j), theta_i) are
    0 off the diagonal and -B(t_i, t_i) on it."""
    tally = _Tally()
    for w in elements:
        if w.is_identity():
            continue
        rec = shelling_order(ctx, w)
        for face in rec.ordered_facets:
            vt = vertex_types(ctx, face)
            taus = face_roots(ctx, face)
            for i, (eta, theta) in enumerate(zip(vt.eta, vt.theta)):
                for j, t in enumerate(taus):
                    want = -ctx.rs.inner(taus[i], taus[i]) if i == j else 0
                    tally(ctx.mu_dot(eta, t) == want, ("eta", face, i, j))
                    tally(ctx.mu_dot(t, theta) == want, ("theta", face, i, j))
    return tally.result("wall duality")


# ---------------------------------------------------------------- flagness

def flagness_exhaustive(ctx: CoxeterContext) -> tuple:
    vertices = list(ctx.indices())
    count = 0
    for k in range(1, ctx.n + 1):
        for face in itertools.combinations(vertices, k):
            count += 1
            if is_face(ctx, face) != is_face_pairwise(ctx, face):
                return False, f"definitional and pairwise tests disagree on {face}"
    return True, f"{count} subsets, exhaustive"


def flagness_sampled(ctx: CoxeterContext, samples: int = FLAG_SAMPLES, seed: int = 0) -> tuple:
    rng = random.Random(seed)
    vertices = list(ctx.indices())
    faces = 0
    for _ in range(samples):
        k = rng.randint(1, ctx.n)
        face = tuple(sorted(rng.sample(vertices, k)))
        a = is_face(ctx, face)
        faces += a
        if a != is_face_pairwise(ctx, face):
            return False, f"definitional and pairwise tests disagree on {face}"
    return True, f"{samples} random subsets (seed {seed}), {faces} faces"


# ---------------------------------------------------------------- driver

def verify_type(
    type_name: str,
    allow_large: bool = False,
    flag_samples: int = FLAG_SAMPLES,
    seed: int = 0,
) -> VerificationReport:
    """Build everything for one type and run every applicable check.

    Raises :class:`~coxcluster.root_system.UnsupportedType` for bad input;
    check failures are recorded in the report, never raised.
    """
    t = parse_cartan_type(type_name, allow_large=allow_large)
    report = VerificationReport(cartan_type=t.name)
    timer = _Timer(report.timing)
    n = t.rank

    with timer.phase("build"):
        ctx = build_context(build_root_system(t))
    with timer.phase("lattice"):
        lat = enumerate_ncp(ctx)
    report.catalan = catalan_number(t)
    report.rank_counts = list(lat.rank_counts)
    report.nonperipheral_by_rank = count_nonperipheral_by_rank(lat)

    state = {}

    def shell_delta():
        with timer.phase("complex"):
            state["delta"] = rec = shelling_order(ctx)
        report.h_delta = list(rec.h_from_f)
        report.facet_count_delta = len(rec.ordered_facets)
        ok = rec.h_from_shelling == rec.h_from_f
        return ok, f"h = {rec.h_from_f}, from shelling {rec.h_from_shelling}"

    def shell_positive():
        with timer.phase("complex"):
            state["pos"] = rec = shelling_order(ctx, ctx.gamma)
        report.h_positive = list(rec.h_from_f)
        report.facet_count_positive = len(rec.ordered_facets)
        ok = rec.h_from_shelling == rec.h_from_f
        return ok, f"h = {rec.h_from_f}, from shelling {rec.h_from_shelling}"

    _run(report, "shelling of Delta", 3, shell_delta)
    _run(report, "shelling of X(gamma)", 3, shell_positive)
    delta, pos = state.get("delta"), state.get("pos")

    def catalan():
        nf = len(delta.ordered_facets)
        ok = len(lat) == nf == report.catalan
        return ok, f"|L| = {len(lat)}, facets = {nf}, Catalan = {report.catalan}"

    def h_vs_ranks():
        ok = delta.h_from_f == lat.rank_counts
        return ok, f"h = {delta.h_from_f}, rank counts = {lat.rank_counts}"

    _run(report, "Catalan count", 1, catalan)
    _run(report, "h(Delta) = rank counts", 2, h_vs_ranks)

    if n <= SMALL_RANK:
        def subcomplexes():
            tested = 0
            for w in lat.elements:
                if 1 <= w.length <= 3:
                    rec = shelling_order(ctx, w)
                    if rec.h_from_shelling != rec.h_from_f:
                        return False, f"X(w) h-vectors differ for w of length {w.length}"
                    tested += 1
            return True, f"{tested} subcomplexes X(w) with 1 <= l(w) <= 3"

        with timer.phase("shelling"):
            _run(report, "reverse-lex shelling of X(w)", 3, subcomplexes)

    def bijection():
        images = [r.phi_image for r in delta.records]
        if len(set(images)) != len(images):
            return False, "phi is not injective"
        if set(images) != set(lat.elements):
            return False, "image of phi differs from the lattice"
        for r, rset in zip(delta.records, delta.restriction_sets):
            if r.phi_image.length != r.n_right:
                return False, f"l(phi(F)) != #right vertices for {r.face}"
            if len(rset) != n - r.phi_image.length:
                return False, f"|R(F)| != corank of phi(F) for {r.face}"
        with timer.phase("phi"):
            for r in delta.records:
                if phi_preimage(ctx, r.phi_image) != r.face:
                    return False, f"phi_preimage does not recover {r.face}"
        return True, f"{len(images)} facets"

    _run(report, "phi bijection", 4, bijection)

    def positive_part():
        nonper = report.nonperipheral_by_rank
        h = pos.h_from_f
        if len(pos.ordered_facets) != sum(nonper):
            return False, f"{len(pos.ordered_facets)} positive facets, {sum(nonper)} non-peripheral"
        if [nonper[n - i] for i in range(n + 1)] != h:
            return False, f"h(X) = {h}, reversed non-peripheral counts = {nonper[::-1]}"
        omega = [ctx.reflection(r) for r in ctx.omega]
        clear = [0] * (n + 1)
        for w in lat.elements:
            if not any(leq_abs(r, w) for r in omega):
                clear[w.length] += 1
        if clear != h:
            return False, f"h(X) = {h}, elements above no Omega reflection = {clear}"
        return True, f"{sum(nonper)} positive facets, h = {h}"

    def chapoton():
        f = full_support_reflection_count(ctx)
        h = pos.h_from_f[n - 1]
        return h == f, f"h_(n-1)(X) = {h}, full-support reflections = {f}"

    def euler():
        a = reduced_euler_characteristic(delta.f_vector)
        b = reduced_euler_characteristic(pos.f_vector)
        ok = a == (-1) ** (n - 1) and b == 0
        return ok, f"reduced chi: Delta {a}, X(gamma) {b}"

    _run(report, "positive facets and h(X)", 5, positive_part)
    _run(report, "h_(n-1)(X) = full-support reflections", 6, chapoton)
    _run(report, "reduced Euler characteristics", 8, euler)

    with timer.phase("properties"):
        _structural_checks(report, ctx, lat, delta)
        if n <= SMALL_RANK:
            els = lat.elements
            _run(report, "mu edge criterion", 7, lambda: mu_edge_criterion(ctx))
            _run(report, "mu fixed space", 7, lambda: mu_fixed_space(ctx))
            _run(report, "mu lattice identities", 7, lambda: mu_lattice_identities(ctx, els))
            _run(report, "mu order signs", 7, lambda: mu_order_signs(ctx))
            _run(report, "simple system duality", 7, lambda: mu_simple_system_duality(ctx, els))
            _run(report, "wall duality", 7, lambda: mu_wall_duality(ctx, els))

    if n <= SMALL_RANK:
        with timer.phase("flagness"):
            if n <= EXHAUSTIVE_FLAG_RANK:
                _run(report, "flagness", 9, lambda: flagness_exhaustive(ctx))
            else:
                _run(report, "flagness", 9, lambda: flagness_sampled(ctx, flag_samples, seed))
    return report


def _structural_checks(report, ctx, lat, delta) -> None:
    n = ctx.n
    g = ctx.gamma

    def lattice_shape():
        rc = lat.rank_counts
        if rc[0] != 1 or rc[n] != 1 or (n >= 1 and rc[1] != ctx.N):
            return False, f"rank counts {rc}"
        if rc != rc[::-1]:
            return False, f"rank counts {rc} are not symmetric"
        for w in lat.elements:
            c = w.inverse() * g
            if c not in lat or c.length != n - w.length:
                return False, "w -> w^-1 gamma does not reverse rank"
        return True, f"rank counts {rc}"

    def peripheral_criteria():
        for w, flag in zip(lat.elements, lat.peripheral_flags):
            if flag != peripheral_by_support(ctx, w):
                return False, "Omega test and support test disagree"
        return True, f"{len(lat)} elements"

    def facet_structure():
        # right/left vertices of a positive facet are the last facet of X(phi F)
        # and the first facet of X(phi(F)^-1 gamma); only positive facets map
        # to non-peripheral elements; negative vertices are always left
        periph = {w: f for w, f in zip(lat.elements, lat.peripheral_flags)}
        for r in delta.records:
            face = r.face
            positive = all(i >= 1 for i in face) and all(i <= ctx.N for i in face)
            if positive == periph[r.phi_image]:
                return False, f"positivity of {face} vs peripheral phi image"
            for i, t in zip(face, r.vertex_types):
                if not 1 <= i <= ctx.N and t != LEFT:
                    return False, f"negative vertex rho_{i} of {face} is not left"
            if positive:
                w = r.phi_image
                right = last_facet(ctx, w) if not w.is_identity() else ()
                v = w.inverse() * g
                left = first_facet(ctx, v) if not v.is_identity() else ()
                if r.right != right or r.left != left:
                    return False, f"vertex types of {face} do not match first/last facets"
                taus = face_roots(ctx, face)
                for a in range(n):
                    for b in range(a + 1, n):
                        if (r.vertex_types[a], r.vertex_types[b]) == (RIGHT, LEFT):
                            if ctx.rs.inner(taus[a], taus[b]) != 0:
                                return False, f"right/left pair in {face} not orthogonal"
        return True, f"{len(delta.records)} facets"

    def h_symmetry():
        h = delta.h_from_f
        return h == h[::-1], f"h = {h}"

    _run(report, "lattice shape and complement", 0, lattice_shape)
    _run(report, "peripheral criteria agree", 0, peripheral_criteria)
    _run(report, "vertex types vs first/last facets", 0, facet_structure)
    _run(report, "h(Delta) symmetric", 0, h_symmetry)
