"""Empirical verification of the functional inequalities.

Every checker runs one inequality family over a corpus of test
functions and returns a CheckReport: the best (smallest) constant that
makes the inequality hold on every sample — equivalently the max of
LHS/RHS — together with the witness where that max is attained, grids
used, per-sample rows, and any secondary quantities in ``aux``.

Checkers never assert; they measure.  The test-suite turns the reported
numbers into pass/fail decisions.
"""

import numpy as np
import scipy.linalg

from .funcnorms import (
    besov_norm,
    gradient_modulus,
    hessian_modulus,
    lp_norm,
    morrey_norm,
    sobolev_norm,
    triebel_sup,
)
from .rearrange import (
    adaptive_integral,
    decreasing_rearrangement,
    step_product_integral,
)

REPORT_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": [
        "name",
        "params",
        "constant",
        "witness",
        "n_samples",
        "n_skipped",
        "range_note",
        "samples",
        "aux",
    ],
    "properties": {
        "name": {"type": "string"},
        "params": {"type": "object"},
        "constant": {"type": "number"},
        "witness": {"type": "object"},
        "n_samples": {"type": "integer", "minimum": 0},
        "n_skipped": {"type": "integer", "minimum": 0},
        "range_note": {"type": "string"},
        "samples": {"type": "array", "items": {"type": "object"}},
        "aux": {"type": "object"},
    },
    "additionalProperties": False,
}


def _py(obj):
    """Convert numpy scalars/arrays to plain python for JSON."""
    if isinstance(obj, dict):
        return {str(k): _py(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_py(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_py(v) for v in obj.tolist()]
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    return obj


class CheckReport:
    def __init__(
        self,
        name,
        params,
        constant,
        witness,
        n_samples,
        n_skipped,
        range_note,
        samples,
        aux=None,
    ):
        self.name = name
        self.params = params
        self.constant = float(constant)
        self.witness = witness
        self.n_samples = int(n_samples)
        self.n_skipped = int(n_skipped)
        self.range_note = range_note
        self.samples = samples
        self.aux = aux if aux is not None else {}

    def to_dict(self):
        return _py(
            {
                "name": self.name,
                "params": self.params,
                "constant": self.constant,
                "witness": self.witness,
                "n_samples": self.n_samples,
                "n_skipped": self.n_skipped,
                "range_note": self.range_note,
                "samples": self.samples,
                "aux": self.aux,
            }
        )


class ExponentSet:
    """Scaling-consistent exponents for the interpolation family.

    For target exponent l and gradient exponent p (1 <= p < l):
    theta = p / l and the smoothness alpha = p / (p - l) < 0, so that
    ||f||_l compares against ||grad f||_p^theta * (alpha-norm)^(1-theta).
    """

    def __init__(self, p, l):
        p = float(p)
        l = float(l)
        if not (1 <= p < l):
            raise ValueError("need 1 <= p < l, got p=%r l=%r" % (p, l))
        self.p = p
        self.l = l
        self.theta = p / l
        self.alpha = p / (p - l)

    def as_dict(self):
        return {"p": self.p, "l": self.l, "theta": self.theta, "alpha": self.alpha}


def exponents(p, l):
    return ExponentSet(p, l)


def _s_grid(space, s_points):
    return np.geomspace(float(space.mu.min()), space.total_measure, int(s_points))


def _max_update(best, value, witness):
    if value > best[0]:
        return (value, witness)
    return best


# ---------------------------------------------------------------------------
# hypotheses: local Poincare inequalities
# ---------------------------------------------------------------------------


def _pencil_gap(space, members=None):
    """Smallest nonzero eigenvalue of the measure pencil on a vertex set.

    The quadratic form is sum over internal edges of w (mu_x + mu_y)
    (f_y - f_x)^2 against sum mu f^2; its first nonzero eigenvalue
    governs the sharp mean-deviation constant.
    """
    if members is None:
        members = np.arange(space.n)
    loc = -np.ones(space.n, dtype=np.int64)
    loc[members] = np.arange(len(members))
    k = len(members)
    e0, e1 = space.edges[:, 0], space.edges[:, 1]
    sel = (loc[e0] >= 0) & (loc[e1] >= 0)
    ia, ib = loc[e0[sel]], loc[e1[sel]]
    cw = space.edge_w[sel] * (space.mu[e0[sel]] + space.mu[e1[sel]])
    L = np.zeros((k, k))
    np.add.at(L, (ia, ia), cw)
    np.add.at(L, (ib, ib), cw)
    np.add.at(L, (ia, ib), -cw)
    np.add.at(L, (ib, ia), -cw)
    M = np.diag(space.mu[members])
    vals = scipy.linalg.eigh(L, M, eigvals_only=True)
    return float(vals[1]) if k > 1 else 0.0


def check_poincare(space, corpus, q=2, r_max=4, eigen=True, eigen_cap=400, mode="l2"):
    """Mean-deviation vs gradient on balls: is
    (avg_B |f - f_B|^q)^(1/q) <= C r (avg_B |grad f|^q)^(1/q)?

    The gradient is the ambient modulus restricted to the ball.  For
    q = 2 the per-ball sharp constant 1/(r sqrt(gap)) from the internal
    spectral pencil is reported in aux (it dominates the corpus value),
    along with the unnormalized global inverse gap — the quantity that
    diverges on spaces glued from well-separated chunks.
    """
    r_max = max(1, min(int(r_max), max(space.diameter, 1)))
    F = np.stack(list(corpus), axis=1)
    G = np.stack([gradient_modulus(space, f, mode) for f in corpus], axis=1)
    mu = space.mu
    best = (0.0, {})
    n_skipped = 0
    rows = []
    per_sample_max = np.zeros(len(corpus))
    for r in range(1, r_max + 1):
        rc = min(r, space.diameter)
        for x in range(space.n):
            mem = space.ball(x, rc)
            mb = space._ball_mu[x, rc]
            w = mu[mem][:, None]
            fb = (w * F[mem]).sum(axis=0) / mb
            dev = ((w * np.abs(F[mem] - fb[None, :]) ** q).sum(axis=0) / mb) ** (
                1.0 / q
            )
            den = r * ((w * G[mem] ** q).sum(axis=0) / mb) ** (1.0 / q)
            ok = den > 1e-300
            n_skipped += int((~ok).sum())
            if not ok.any():
                continue
            ratios = np.where(ok, dev / np.where(ok, den, 1.0), 0.0)
            j = int(np.argmax(ratios))
            per_sample_max = np.maximum(per_sample_max, ratios)
            best = _max_update(
                best,
                float(ratios[j]),
                {"vertex": space.ids[x], "r": r, "sample": corpus.labels[j]},
            )
    for j, lab in enumerate(corpus.labels):
        rows.append({"sample": lab, "ratio": float(per_sample_max[j])})

    aux = {}
    if eigen and q == 2:
        eig_best = (0.0, {})
        skipped_balls = 0
        for r in range(1, r_max + 1):
            rc = min(r, space.diameter)
            for x in range(space.n):
                mem = space.ball(x, rc)
                if len(mem) > eigen_cap:
                    skipped_balls += 1
                    continue
                gap = _pencil_gap(space, mem)
                if gap <= 1e-14:
                    continue
                val = 1.0 / (r * np.sqrt(gap))
                eig_best = _max_update(
                    eig_best, val, {"vertex": space.ids[x], "r": r}
                )
        aux["eigen_optimum"] = eig_best[0]
        aux["eigen_witness"] = eig_best[1]
        aux["eigen_balls_over_cap"] = skipped_balls
        if space.n <= 1500:
            gap = _pencil_gap(space)
            aux["global_inverse_gap"] = (1.0 / gap) if gap > 1e-300 else None
    return CheckReport(
        name="poincare_balls",
        params={"q": q, "r_max": r_max, "mode": mode},
        constant=best[0],
        witness=best[1],
        n_samples=len(corpus),
        n_skipped=n_skipped,
        range_note="balls of radius 1..%d around every vertex" % r_max,
        samples=rows,
        aux=aux,
    )


def check_pseudo_poincare_heat(space, corpus, sg, q=1, mode="l2"):
    """||f - P_t f||_q <= C sqrt(t) ||grad f||_q over the time grid."""
    F = np.stack(list(corpus), axis=1)
    gn = np.array([lp_norm(space, gradient_modulus(space, f, mode), q) for f in corpus])
    best = (0.0, {})
    rows = []
    n_skipped = 0
    for t in sg.t_grid:
        Pt = sg.apply(F, t)
        for j in range(F.shape[1]):
            if gn[j] <= 1e-300:
                n_skipped += 1
                continue
            ratio = lp_norm(space, F[:, j] - Pt[:, j], q) / (np.sqrt(t) * gn[j])
            rows.append({"sample": corpus.labels[j], "t": float(t), "ratio": ratio})
            best = _max_update(
                best, ratio, {"sample": corpus.labels[j], "t": float(t)}
            )
    return CheckReport(
        name="pseudo_poincare_heat",
        params={"q": q, "mode": mode},
        constant=best[0],
        witness=best[1],
        n_samples=len(corpus),
        n_skipped=n_skipped,
        range_note="t on the dyadic grid [%g, %g]" % (sg.t_min, sg.t_max),
        samples=rows,
        aux={"t_grid": list(sg.t_grid)},
    )


def check_pseudo_poincare_avg(space, corpus, q=1, r_max=4, mode="l2"):
    """||f - A_r f||_q <= C r ||grad f||_q with A_r the ball average."""
    r_max = max(1, min(int(r_max), max(space.diameter, 1)))
    F = np.stack(list(corpus), axis=1)
    gn = np.array([lp_norm(space, gradient_modulus(space, f, mode), q) for f in corpus])
    mF = space.mu[:, None] * F
    best = (0.0, {})
    rows = []
    n_skipped = 0
    for r in range(1, r_max + 1):
        rc = min(r, space.diameter)
        mask = space.dist <= rc
        A = (mask @ mF) / space._ball_mu[:, rc][:, None]
        for j in range(F.shape[1]):
            if gn[j] <= 1e-300:
                n_skipped += 1
                continue
            ratio = lp_norm(space, F[:, j] - A[:, j], q) / (r * gn[j])
            rows.append({"sample": corpus.labels[j], "r": r, "ratio": ratio})
            best = _max_update(best, ratio, {"sample": corpus.labels[j], "r": r})
    return CheckReport(
        name="pseudo_poincare_avg",
        params={"q": q, "r_max": r_max, "mode": mode},
        constant=best[0],
        witness=best[1],
        n_samples=len(corpus),
        n_skipped=n_skipped,
        range_note="ball averages of radius 1..%d" % r_max,
        samples=rows,
        aux={},
    )


# ---------------------------------------------------------------------------
# pointwise symmetrization bounds
# ---------------------------------------------------------------------------


def _sym_core(space, corpus, sg, q, alpha, s_points, norm_of, name, mode):
    """Shared driver: ((f^q)**)^(1/q)(s) against the theta-blend of the
    gradient average and a smoothness norm (or s-dependent profile)."""
    s_grid = _s_grid(space, s_points)
    theta = abs(alpha) / (1.0 + abs(alpha))
    best = (0.0, {})
    rows = []
    n_skipped = 0
    for j, f in enumerate(corpus):
        u = gradient_modulus(space, f, mode)
        uq = decreasing_rearrangement(space, u).power(q)
        fq = decreasing_rearrangement(space, f).power(q)
        nval, profile = norm_of(f)
        lhs = fq.double_star(s_grid) ** (1.0 / q)
        xterm = uq.double_star(s_grid) ** (1.0 / q)
        if profile is None:
            nterm = np.full_like(s_grid, nval ** (1.0 - theta))
        else:
            pq = decreasing_rearrangement(space, profile).power(q)
            nterm = (pq.double_star(s_grid) ** (1.0 / q)) ** (1.0 - theta)
        rhs = xterm**theta * nterm
        ok = rhs > 1e-300
        n_skipped += int((~ok).sum())
        ratios = np.where(ok, lhs / np.where(ok, rhs, 1.0), 0.0)
        i = int(np.argmax(ratios))
        rows.append(
            {
                "sample": corpus.labels[j],
                "ratio": float(ratios[i]),
                "s": float(s_grid[i]),
                "norm": float(nval) if profile is None else None,
            }
        )
        best = _max_update(
            best,
            float(ratios[i]),
            {"sample": corpus.labels[j], "s": float(s_grid[i])},
        )
    return CheckReport(
        name=name,
        params={"q": q, "alpha": alpha, "s_points": int(s_points), "mode": mode},
        constant=best[0],
        witness=best[1],
        n_samples=len(corpus),
        n_skipped=n_skipped,
        range_note="s log-spaced on [%g, %g], %d points"
        % (s_grid[0], s_grid[-1], len(s_grid)),
        samples=rows,
        aux={"theta": theta},
    )


def check_symmetrization_besov(space, corpus, sg, q=1, alpha=-1.0, s_points=32, mode="l2"):
    """((f^q)**)^(1/q)(s) <= C [((grad^q)**)^(1/q)(s)]^theta N^(1-theta)
    with N the heat-regularity seminorm of smoothness alpha."""

    def norm_of(f):
        return besov_norm(space, f, alpha, sg, mode="seminorm"), None

    return _sym_core(
        space, corpus, sg, q, alpha, s_points, norm_of, "symmetrization_besov", mode
    )


def check_symmetrization_morrey(space, corpus, sg, q=1, alpha=-1.0, s_points=32, mode="l2"):
    """Same comparison with the ball-average norm in place of the
    heat-regularity seminorm."""

    def norm_of(f):
        return morrey_norm(space, f, alpha), None

    return _sym_core(
        space, corpus, sg, q, alpha, s_points, norm_of, "symmetrization_morrey", mode
    )


def check_symmetrization_heat_profile(
    space, corpus, sg, q=1, alpha=-1.0, s_points=32, mode="l2"
):
    """Sharpest variant: the norm factor is replaced by the rearranged
    pointwise heat profile evaluated at the same s."""

    def norm_of(f):
        return np.nan, triebel_sup(space, f, alpha, sg, mean_zero="allow")

    return _sym_core(
        space,
        corpus,
        sg,
        q,
        alpha,
        s_points,
        norm_of,
        "symmetrization_heat_profile",
        mode,
    )


def check_heat_residual_symmetrization(space, corpus, sg, q=1, s_points=32, mode="l2"):
    """(( |f - P_t f|^q )**)^(1/q)(s) <= C sqrt(t) ((grad^q)**)^(1/q)(s)."""
    s_grid = _s_grid(space, s_points)
    best = (0.0, {})
    rows = []
    n_skipped = 0
    for j, f in enumerate(corpus):
        u = gradient_modulus(space, f, mode)
        uq = decreasing_rearrangement(space, u).power(q)
        xs = uq.double_star(s_grid) ** (1.0 / q)
        ok = xs > 1e-300
        for t in sg.t_grid:
            g = f - sg.apply(f, t)
            gq = decreasing_rearrangement(space, g).power(q)
            lhs = gq.double_star(s_grid) ** (1.0 / q)
            rhs = np.sqrt(t) * xs
            n_skipped += int((~ok).sum())
            ratios = np.where(ok, lhs / np.where(ok, rhs, 1.0), 0.0)
            i = int(np.argmax(ratios))
            rows.append(
                {
                    "sample": corpus.labels[j],
                    "t": float(t),
                    "ratio": float(ratios[i]),
                    "s": float(s_grid[i]),
                }
            )
            best = _max_update(
                best,
                float(ratios[i]),
                {"sample": corpus.labels[j], "t": float(t), "s": float(s_grid[i])},
            )
    return CheckReport(
        name="heat_residual_symmetrization",
        params={"q": q, "s_points": int(s_points), "mode": mode},
        constant=best[0],
        witness=best[1],
        n_samples=len(corpus),
        n_skipped=n_skipped,
        range_note="t dyadic on [%g, %g]; s log-spaced, %d points"
        % (sg.t_min, sg.t_max, int(s_points)),
        samples=rows,
        aux={},
    )


# ---------------------------------------------------------------------------
# interpolation inequalities (global / local / weak)
# ---------------------------------------------------------------------------


def check_gn(space, corpus, sg, p=1.0, l=2.0, local=False, mode="l2"):
    """||f||_l <= C ||grad f||_p^theta N^(1-theta) with the matched
    exponents; ``local`` replaces the gradient norm by the full
    first-order Sobolev norm."""
    exps = exponents(p, l)
    best = (0.0, {})
    rows = []
    n_skipped = 0
    for j, f in enumerate(corpus):
        nval = besov_norm(space, f, exps.alpha, sg, mode="seminorm")
        if local:
            gterm = sobolev_norm(space, f, p, mode)
        else:
            gterm = lp_norm(space, gradient_modulus(space, f, mode), p)
        rhs = gterm**exps.theta * nval ** (1.0 - exps.theta)
        if rhs <= 1e-300:
            n_skipped += 1
            continue
        lhs = lp_norm(space, f, l)
        ratio = lhs / rhs
        rows.append(
            {
                "sample": corpus.labels[j],
                "ratio": ratio,
                "lhs": lhs,
                "grad_term": gterm,
                "smoothness_norm": nval,
            }
        )
        best = _max_update(best, ratio, {"sample": corpus.labels[j]})
    return CheckReport(
        name="interpolation_local" if local else "interpolation_global",
        params={"p": p, "l": l, "local": bool(local), "mode": mode, **exps.as_dict()},
        constant=best[0],
        witness=best[1],
        n_samples=len(corpus),
        n_skipped=n_skipped,
        range_note="corpus functions, matched exponents",
        samples=rows,
        aux={},
    )


def check_gn_weak(space, corpus, sg, q=1.0, l=2.0, mode="l2"):
    """Weak-type variant: sup_lambda lambda mu(|f|>lambda)^(1/l) against
    ||grad f||_q^(q/l) N^(1-q/l) at smoothness q/(q-l)."""
    q = float(q)
    l = float(l)
    if not (1 <= q < l):
        raise ValueError("need 1 <= q < l")
    alpha_w = q / (q - l)
    theta_w = q / l
    best = (0.0, {})
    rows = []
    n_skipped = 0
    for j, f in enumerate(corpus):
        nval = besov_norm(space, f, alpha_w, sg, mode="seminorm")
        gterm = lp_norm(space, gradient_modulus(space, f, mode), q)
        rhs = gterm**theta_w * nval ** (1.0 - theta_w)
        if rhs <= 1e-300:
            n_skipped += 1
            continue
        sf = decreasing_rearrangement(space, f)
        lhs = sf.lorentz(l, np.inf, variant="star")
        ratio = lhs / rhs
        rows.append({"sample": corpus.labels[j], "ratio": ratio, "lhs": lhs})
        best = _max_update(best, ratio, {"sample": corpus.labels[j]})
    return CheckReport(
        name="interpolation_weak",
        params={"q": q, "l": l, "alpha": alpha_w, "theta": theta_w, "mode": mode},
        constant=best[0],
        witness=best[1],
        n_samples=len(corpus),
        n_skipped=n_skipped,
        range_note="corpus functions, weak-type left side",
        samples=rows,
        aux={},
    )


# ---------------------------------------------------------------------------
# kernel decay and the strong-type target inequality
# ---------------------------------------------------------------------------


def check_sobolev_recovery(space, corpus, sg, q=1.0, nu=2.0, ts=None, mode="l2"):
    """Kernel-decay fit plus the target inequality it implies.

    aux carries max_t t^(nu/(2q)) ||P_t||_{q->inf} and the log-log slope
    of the decay curve; the report constant is the empirical constant of
    ||f||_{q*} <= C ||grad f||_q with 1/q* = 1/q - 1/nu.
    """
    q = float(q)
    nu = float(nu)
    if nu <= q:
        raise ValueError("need nu > q for a finite target exponent")
    if ts is None:
        ts = sg.t_grid
    ts = np.asarray(ts, dtype=np.float64)
    vals = np.array([sg.op_norm_q_to_inf(t, q) for t in ts])
    slope = float(np.polyfit(np.log(ts), np.log(vals), 1)[0])
    sip = float((ts ** (nu / (2.0 * q)) * vals).max())
    qstar = 1.0 / (1.0 / q - 1.0 / nu)
    best = (0.0, {})
    rows = []
    n_skipped = 0
    for j, f in enumerate(corpus):
        gn = lp_norm(space, gradient_modulus(space, f, mode), q)
        if gn <= 1e-300:
            n_skipped += 1
            continue
        ratio = lp_norm(space, f, qstar) / gn
        rows.append({"sample": corpus.labels[j], "ratio": ratio})
        best = _max_update(best, ratio, {"sample": corpus.labels[j]})
    return CheckReport(
        name="sobolev_recovery",
        params={"q": q, "nu": nu, "qstar": qstar, "mode": mode},
        constant=best[0],
        witness=best[1],
        n_samples=len(corpus),
        n_skipped=n_skipped,
        range_note="decay fit over %d times in [%g, %g]"
        % (len(ts), ts[0], ts[-1]),
        samples=rows,
        aux={
            "decay_t": list(ts),
            "decay_value": list(vals),
            "slope": slope,
            "decay_constant": sip,
        },
    )


def check_oscillation(space, corpus, q=1.0, sigma=2.0, s_points=32, mode="l2"):
    """f**(s) - f*(s) <= C s^(1/sigma) ((grad^q)**)^(1/q)(s)."""
    s_grid = _s_grid(space, s_points)
    best = (0.0, {})
    rows = []
    n_skipped = 0
    for j, f in enumerate(corpus):
        sf = decreasing_rearrangement(space, f)
        u = gradient_modulus(space, f, mode)
        uq = decreasing_rearrangement(space, u).power(q)
        osc = sf.double_star(s_grid) - sf.evaluate(s_grid)
        rhs = s_grid ** (1.0 / sigma) * uq.double_star(s_grid) ** (1.0 / q)
        ok = rhs > 1e-300
        n_skipped += int((~ok).sum())
        ratios = np.where(ok, osc / np.where(ok, rhs, 1.0), 0.0)
        i = int(np.argmax(ratios))
        rows.append(
            {"sample": corpus.labels[j], "ratio": float(ratios[i]), "s": float(s_grid[i])}
        )
        best = _max_update(
            best, float(ratios[i]), {"sample": corpus.labels[j], "s": float(s_grid[i])}
        )
    return CheckReport(
        name="oscillation_bound",
        params={"q": q, "sigma": sigma, "s_points": int(s_points), "mode": mode},
        constant=best[0],
        witness=best[1],
        n_samples=len(corpus),
        n_skipped=n_skipped,
        range_note="s log-spaced, %d points" % int(s_points),
        samples=rows,
        aux={},
    )


# ---------------------------------------------------------------------------
# Lorentz-scale refinement
# ---------------------------------------------------------------------------


def lorentz_exponents(p, q, sigma, theta, l=None, m0=None, m1=None):
    """Resolve and validate the exponent bookkeeping of the refined
    inequality on the Lorentz scale.

    1/p* = 1/p - 1/sigma (sigma > p > q >= 1), m0 >= q, theta in [0,1];
    target indices 1/r = (1-theta)/p* + theta/l and 1/m =
    (1-theta)/m0 + theta/m1.  theta = 0 needs no (l, m1).
    """
    p, q, sigma, theta = float(p), float(q), float(sigma), float(theta)
    if not (q >= 1 and p > q):
        raise ValueError("need p > q >= 1")
    if sigma <= p:
        raise ValueError("need sigma > p for a finite target index")
    if not (0 <= theta <= 1):
        raise ValueError("theta must lie in [0, 1]")
    if m0 is None:
        m0 = p
    m0 = float(m0)
    if m0 < q:
        raise ValueError("need m0 >= q")
    pstar = 1.0 / (1.0 / p - 1.0 / sigma)
    if theta == 0:
        r = pstar
        m = m0
    else:
        if l is None or m1 is None:
            raise ValueError("theta > 0 needs l and m1")
        l = float(l)
        m1 = float(m1)
        if l <= 0 or m1 < 1:
            raise ValueError("need l > 0 and m1 >= 1")
        inv_r = (1.0 - theta) / pstar + theta / l
        inv_m = (1.0 - theta) / m0 + (theta / m1 if not np.isinf(m1) else 0.0)
        r = 1.0 / inv_r
        m = 1.0 / inv_m if inv_m > 0 else np.inf
    return {
        "p": p,
        "q": q,
        "sigma": sigma,
        "theta": theta,
        "pstar": pstar,
        "m0": m0,
        "l": l,
        "m1": m1,
        "r": r,
        "m": m,
    }


def check_lorentz_gn(
    space, corpus, p=2.0, q=1.0, sigma=2.0, theta=0.0, l=None, m0=None, m1=None,
    mode="l2",
):
    """Refined inequality on the Lorentz scale.

    ||f||_{L(r,m)}  <=  C ||grad f||_{L(p,m0)}^(1-theta) ||f||_{L(l,m1)}^theta

    The left side uses the running-average (norm) form; the right-side
    factors use the plain rearrangement form, so at theta = 0 with
    m0 = p the right side is exactly ||grad f||_p.  aux reports the
    empirical constant of the secondary-index embedding
    ||f||_{L(pstar, pstar)} <= C ||f||_{L(pstar, p)}.
    """
    exps = lorentz_exponents(p, q, sigma, theta, l=l, m0=m0, m1=m1)
    r, m, pstar, m0 = exps["r"], exps["m"], exps["pstar"], exps["m0"]
    best = (0.0, {})
    emb_best = 0.0
    rows = []
    n_skipped = 0
    for j, f in enumerate(corpus):
        u = gradient_modulus(space, f, mode)
        usf = decreasing_rearrangement(space, u)
        gterm = usf.lorentz(exps["p"], m0, variant="star")
        if theta == 0:
            rhs = gterm
        else:
            fsf = decreasing_rearrangement(space, f)
            fterm = fsf.lorentz(exps["l"], exps["m1"], variant="star")
            rhs = gterm ** (1.0 - theta) * fterm**theta
        if rhs <= 1e-300:
            n_skipped += 1
            continue
        sf = decreasing_rearrangement(space, f)
        lhs = sf.lorentz(r, m, variant="double_star")
        ratio = lhs / rhs
        rows.append({"sample": corpus.labels[j], "ratio": ratio, "lhs": lhs, "rhs": rhs})
        best = _max_update(best, ratio, {"sample": corpus.labels[j]})
        den = sf.lorentz(pstar, exps["p"], variant="star")
        if den > 1e-300:
            emb_best = max(emb_best, sf.lorentz(pstar, pstar, variant="star") / den)
    return CheckReport(
        name="lorentz_interpolation",
        params={k: (None if v is None else float(v)) for k, v in exps.items()},
        constant=best[0],
        witness=best[1],
        n_samples=len(corpus),
        n_skipped=n_skipped,
        range_note="corpus functions on the Lorentz scale",
        samples=rows,
        aux={"embedding_constant": emb_best, "mode": mode},
    )


# ---------------------------------------------------------------------------
# nonlinear (higher-order) chain
# ---------------------------------------------------------------------------


def _integrate_piecewise(fun, edges, collect=None):
    total = 0.0
    for lo, hi in zip(edges[:-1], edges[1:]):
        if hi > lo:
            total += adaptive_integral(fun, lo, hi, collect=collect)
    return total


def check_nonlinear_gn(space, corpus, sg, p=2.0, q=1.0, variant="besov", mode="l2"):
    """Higher-order inequality via the verified majorization chain.

    For each sample, with u = |grad f|, v = |second differences of f|,
    w = |f|, phi = u^(p-1) v w and r = (p+1)/q, the chain

      integral of phi dmu  =  integral of phi*          (equimeasurable)
        <= integral of a* b* c*                         (3-term rearrangement)
        <= integral of a~ b~ c*                         (* <= **)
        <= C_B N^(1/2) integral of (uq**)^((p+1)/2q) c* (profile constant)
        <= C_B N^(1/2) sqrt(H) sqrt(E)                  (Cauchy-Schwarz)
      with E = integral of c^2 dmu and the averaged-power integral H
      dominated by (r/(r-1))^r integral of u^(p+1) dmu  (averaging bound)

    is checked step by step with shared quadrature nodes, so each
    comparison is either exact or guaranteed up to round-off.  The
    reported constant is the max over samples of
    integral u^(p+1) dmu / (N * integral v^2 u^(p-2) dmu).
    """
    p = float(p)
    q = float(q)
    if p < max(2.0, q):
        raise ValueError("need p >= max(2, q)")
    if q < 1:
        raise ValueError("need q >= 1")
    r = (p + 1.0) / q
    if r <= 1:
        raise ValueError("need (p+1)/q > 1")
    hardy_const = (r / (r - 1.0)) ** r
    alpha = -1.0
    muM = space.total_measure
    best = (0.0, {})
    rows = []
    n_skipped = 0
    all_ok = True
    rel = 1e-8
    for j, f in enumerate(corpus):
        u = gradient_modulus(space, f, mode)
        v = hessian_modulus(space, f)
        w = np.abs(f)
        if variant == "besov":
            N = besov_norm(space, f, alpha, sg, mode="seminorm")
        elif variant == "morrey":
            N = morrey_norm(space, f, alpha)
        else:
            raise ValueError("variant must be 'besov' or 'morrey'")
        phi = u ** (p - 1.0) * v * w
        a = u ** (p / 2.0)
        c = u ** ((p - 2.0) / 2.0) * v if p > 2 else v.copy()
        denom = float((space.mu * c**2).sum())
        if N <= 1e-300 or denom <= 1e-300 or u.max() <= 1e-300:
            n_skipped += 1
            continue

        phis = decreasing_rearrangement(space, phi)
        asf = decreasing_rearrangement(space, a)
        bsf = decreasing_rearrangement(space, f)
        csf = decreasing_rearrangement(space, c)
        uq = decreasing_rearrangement(space, u).power(q)
        fq = bsf.power(q)

        A1 = float((space.mu * phi).sum())
        A2 = phis.power_integral(1.0)
        A3 = step_product_integral([asf, bsf, csf])

        if len(csf) == 0:
            n_skipped += 1
            continue
        support_c = csf.breaks[-1]
        pieces = np.unique(
            np.concatenate(
                [[0.0], uq.breaks, fq.breaks, csf.breaks, [support_c]]
            )
        )
        pieces = pieces[pieces <= support_c + 1e-300]

        def integrand_a4(s):
            return (
                uq.double_star(s) ** (p / (2.0 * q))
                * fq.double_star(s) ** (1.0 / q)
                * csf.evaluate(s)
            )

        nodes = []
        A4 = _integrate_piecewise(integrand_a4, pieces, collect=nodes)
        xs = np.concatenate([x for x, _ in nodes])
        ws = np.concatenate([wgt for _, wgt in nodes])
        uq_nodes = uq.double_star(xs)
        btil = fq.double_star(xs) ** (1.0 / q)
        c_nodes = csf.evaluate(xs)
        A4_nodes = float(np.dot(ws, uq_nodes ** (p / (2.0 * q)) * btil * c_nodes))
        profile = btil / (uq_nodes ** (1.0 / (2.0 * q)) * np.sqrt(N))
        CB = float(profile.max())
        A5_nodes = float(
            np.dot(ws, uq_nodes ** ((p + 1.0) / (2.0 * q)) * c_nodes)
        )
        H_nodes = float(np.dot(ws, uq_nodes**r))
        E_nodes = float(np.dot(ws, c_nodes**2))
        E_exact = csf.power_integral(2.0)
        E_space = denom

        # full averaged-power integral on (0, infinity)
        edges_h = np.unique(np.concatenate([[0.0], uq.breaks, [muM]]))
        edges_h = edges_h[edges_h <= muM]
        if edges_h[-1] < muM:
            edges_h = np.concatenate([edges_h, [muM]])

        def integrand_h(s):
            return uq.double_star(s) ** r

        H_full = _integrate_piecewise(integrand_h, edges_h)
        uq_l1 = uq.power_integral(1.0)
        H_tail = uq_l1**r * muM ** (1.0 - r) / (r - 1.0)
        H_inf = H_full + H_tail
        P_exact = float((space.mu * u ** (p + 1.0)).sum())

        checks = {
            "equimeasurable": abs(A1 - A2) <= rel * max(A1, 1e-300),
            "three_term_rearrangement": A2 <= A3 * (1 + rel) + 1e-300,
            "star_le_doublestar": A3 <= A4 * (1 + rel) + 1e-300,
            "profile_constant": A4_nodes
            <= CB * np.sqrt(N) * A5_nodes * (1 + rel) + 1e-300,
            "cauchy_schwarz": A5_nodes
            <= np.sqrt(H_nodes * E_nodes) * (1 + rel) + 1e-300,
            "node_H_within_full": H_nodes <= H_inf * (1 + rel) + 1e-300,
            "averaging_bound": H_inf <= hardy_const * P_exact * (1 + rel) + 1e-300,
            "equimeasurable_sq": abs(E_exact - E_space)
            <= rel * max(E_space, 1e-300),
            "quadrature_consistent": abs(A4 - A4_nodes)
            <= 1e-9 * max(A4, 1e-300),
        }
        ok = all(checks.values())
        all_ok = all_ok and ok
        ratio = P_exact / (N * denom)
        rows.append(
            {
                "sample": corpus.labels[j],
                "ratio": ratio,
                "smoothness_norm": N,
                "profile_constant": CB,
                "A1": A1,
                "A2": A2,
                "A3": A3,
                "A4": A4,
                "A5": A5_nodes,
                "H": H_inf,
                "E": E_exact,
                "chain_ok": ok,
                "checks": {k: bool(val) for k, val in checks.items()},
            }
        )
        best = _max_update(best, ratio, {"sample": corpus.labels[j]})
    return CheckReport(
        name="nonlinear_interpolation",
        params={"p": p, "q": q, "variant": variant, "mode": mode},
        constant=best[0],
        witness=best[1],
        n_samples=len(corpus),
        n_skipped=n_skipped,
        range_note="majorization chain verified per sample",
        samples=rows,
        aux={"hardy_constant": hardy_const, "all_chains_ok": all_ok},
    )


# ---------------------------------------------------------------------------
# internal consistency of the smoothing rate
# ---------------------------------------------------------------------------


def check_smoothing_rate_consistency(space, corpus, sg, p=2.0, mode="l2"):
    """The residual bound should cost at most twice the generator bound.

    C1 = max sqrt(s) ||Delta P_s f||_p / ||grad f||_p on a quarter-octave
    grid, C2 = the pseudo-Poincare constant on the dyadic grid; writing
    f - P_t f as the time integral of Delta P_s f forces C2 <= 2 C1.
    The reported constant is C2 / (2 C1) — expect comfortably below 1.
    """
    s_lo = sg.t_min / 16.0
    n_quarters = int(np.ceil(4 * np.log2(sg.t_max / s_lo))) + 1
    s_grid = s_lo * 2.0 ** (np.arange(n_quarters) / 4.0)
    best_c1 = 0.0
    best_c2 = (0.0, {})
    n_skipped = 0
    gns = []
    F = np.stack(list(corpus), axis=1)
    for f in corpus:
        gns.append(lp_norm(space, gradient_modulus(space, f, mode), p))
    gns = np.array(gns)
    for s in s_grid:
        Ps = sg.apply(F, s)
        for j in range(F.shape[1]):
            if gns[j] <= 1e-300:
                continue
            val = np.sqrt(s) * lp_norm(space, sg.laplacian(Ps[:, j]), p) / gns[j]
            best_c1 = max(best_c1, val)
    rows = []
    for t in sg.t_grid:
        Pt = sg.apply(F, t)
        for j in range(F.shape[1]):
            if gns[j] <= 1e-300:
                n_skipped += 1
                continue
            ratio = lp_norm(space, F[:, j] - Pt[:, j], p) / (np.sqrt(t) * gns[j])
            best_c2 = _max_update(
                best_c2, ratio, {"sample": corpus.labels[j], "t": float(t)}
            )
    rows.append({"c1": best_c1, "c2": best_c2[0]})
    constant = best_c2[0] / (2.0 * best_c1) if best_c1 > 0 else 0.0
    return CheckReport(
        name="smoothing_rate_consistency",
        params={"p": p, "mode": mode},
        constant=constant,
        witness=best_c2[1],
        n_samples=len(corpus),
        n_skipped=n_skipped,
        range_note="generator on quarter-octave grid [%g, %g]"
        % (s_grid[0], s_grid[-1]),
        samples=rows,
        aux={"generator_constant": best_c1, "residual_constant": best_c2[0]},
    )
