"""Named verification scenarios with machine-readable reports.

Each scenario builds concrete truncated spaces, runs the relevant
operations at pinned thresholds, and reports pass/fail plus every measured
quantity.  Reports echo enough parameters to re-run standalone; given the
same inputs and seed they are byte-identical up to the runtime field.
"""

from __future__ import annotations

import time
from dataclasses import asdict, dataclass

import numpy as np

from .errors import NotNearlyInvariantError, ParseError
from .funcs import CoeffFn, basis_vector, make_fn, monomial_fn
from .inner import BlaschkeSpec, blaschke_scalar, diag_inner, monomial_inner
from .multipliers import (
    MatSymbol,
    apply_multiplier,
    column_symbol,
    compose,
    symbol_column,
)
from .nearly import (
    almost_invariant_Sstar_check,
    certify_nearly,
    decompose,
    duality_check,
    duality_residuals,
    extract_K,
    orthocomplement_membership,
    synthesize_M,
)
from .serialize import parse_symbol_spec
from .subspaces import (
    DEFAULT_TOL,
    Subspace,
    beurling_space,
    complement,
    defect_of,
    degree_slice,
    from_spanning,
    model_space,
    project,
    subspace_distance,
    vanishing_slice,
    wandering,
)

__all__ = ["ScenarioReport", "SCENARIOS", "run_scenario", "run_all", "render_markdown"]


@dataclass(frozen=True)
class ScenarioReport:
    scenario_id: str
    passed: bool
    metrics: dict
    parameters: dict
    runtime_ms: float

    def to_dict(self) -> dict:
        return asdict(self)


def _merge(defaults: dict, params: dict | None) -> dict:
    merged = dict(defaults)
    for key, val in (params or {}).items():
        if key not in defaults:
            raise ParseError(
                f"unknown parameter {key!r}; known: {sorted(defaults)}"
            )
        merged[key] = val
    return merged


def _symbol(spec) -> MatSymbol:
    if isinstance(spec, MatSymbol):
        return spec
    return parse_symbol_spec(spec)


def _monomial_powers(t: MatSymbol):
    """Per-column powers if the symbol is a diagonal of monomials, else None."""
    if t.m_out != t.m_in:
        return None
    powers = []
    for i in range(t.m_in):
        col = t.mats[:, :, i]
        nz = np.argwhere(col != 0)
        if nz.shape[0] != 1:
            return None
        k, row = int(nz[0][0]), int(nz[0][1])
        if row != i or col[k, row] != 1.0:
            return None
        powers.append(k)
    return powers


def _apply_space(t: MatSymbol, space: Subspace, ambient_deg: int,
                 tol: float) -> Subspace:
    """Exact image of a subspace under a multiplier, re-orthonormalized."""
    return from_spanning(
        [apply_multiplier(t, b) for b in space.basis], ambient_deg, tol,
        dim_m=t.m_out,
    )


def _random_fn(rng, dim_m: int, deg: int, unit: bool = True) -> CoeffFn:
    arr = rng.standard_normal((deg + 1, dim_m)) + 1j * rng.standard_normal((deg + 1, dim_m))
    f = CoeffFn(dim_m, arr)
    return f * (1.0 / f.norm()) if unit else f


def _perp_unit(rng, space: Subspace, deg: int) -> CoeffFn:
    """Seeded unit vector orthogonal to the space."""
    for _ in range(16):
        f = _random_fn(rng, space.dim_m, deg)
        g = f - project(space, f)
        if g.norm() > 1e-6:
            return g * (1.0 / g.norm())
    raise RuntimeError("could not draw a vector orthogonal to the space")


# --------------------------------------------------------------------------
# scenario runners


def _sc_beurling(p: dict):
    theta = _symbol(p["theta"])
    n, tol = p["N"], p["tol"]
    rng_full = beurling_space(theta, n, tol=tol)
    rng_res = beurling_space(theta, n, headroom=1, tol=tol)
    cert = defect_of(rng_full, "S", domain=rng_res, tol=tol)
    model = model_space(theta, n, tol=tol)
    overlap = float(np.linalg.norm(np.conj(rng_full.matrix.T) @ model.matrix, 2)) \
        if rng_full.dim and model.dim else 0.0
    dims_exact = rng_full.dim + model.dim == theta.m_out * (n + 1)
    metrics = {
        "shift_defect_dim": cert.defect_dim,
        "shift_escape": cert.singular_values[0] if cert.singular_values else 0.0,
        "range_dim": rng_full.dim,
        "model_dim": model.dim,
        "dims_complementary": dims_exact,
        "range_model_overlap": overlap,
    }
    passed = cert.defect_dim == 0 and dims_exact and overlap <= p["distance_tol"]
    powers = _monomial_powers(theta)
    if powers is not None:
        target = from_spanning(
            [monomial_fn(theta.m_out, i, j) for i, k in enumerate(powers) for j in range(k)],
            n, tol, dim_m=theta.m_out,
        )
        dist = subspace_distance(model, target)
        metrics["distance"] = dist
        metrics["distance_threshold"] = p["distance_tol"]
        passed = passed and dist <= p["distance_tol"]
    return passed, metrics


def _isometry_columns(m: int, r: int) -> list:
    """Deterministic constant isometry columns in C^m."""
    cols = [basis_vector(m, 0)]
    if r > 1:
        mixed = (basis_vector(m, 1) + basis_vector(m, 2)) * (2 ** -0.5) if m >= 3 \
            else basis_vector(m, 1)
        cols.append(mixed)
    return cols[:r]


def _sc_prop_f0k_almost(p: dict):
    m, rprime, n, tol = p["m"], p["rprime"], p["N"], p["tol"]
    r = 2
    if m < r:
        raise ParseError(f"need m >= {r} to embed {r} isometric columns")
    if rprime == 2:
        theta = diag_inner([monomial_inner(1, 2), monomial_inner(2, 2)], 2)
    elif rprime == 1:
        mats = np.zeros((3, 2, 1), dtype=complex)
        mats[1, 0, 0] = 2 ** -0.5
        mats[2, 1, 0] = 2 ** -0.5
        theta = MatSymbol(2, 1, mats, 0.0, claimed_inner=True)
    else:
        raise ParseError("rprime must be 1 or 2")
    v_cols = _isometry_columns(m, r)
    v_mats = np.stack([np.column_stack([c.coeffs[0] for c in v_cols])])
    v_sym = MatSymbol(m, r, v_mats)
    k_theta = model_space(theta, n, tol=tol)
    space = _apply_space(v_sym, k_theta, n, tol)
    nearly_cert = certify_nearly(space, 0, band=k_theta.band)
    domain = degree_slice(space, n - 1)
    cert = defect_of(space, "S", domain=domain, tol=p["defect_tol"])
    escapes = []
    for i in range(rprime):
        t = apply_multiplier(v_sym, symbol_column(theta, i))
        escapes.append(t - project(space, t))
    target = from_spanning(escapes, n, tol)
    found = from_spanning(list(cert.defect_basis), n, tol, dim_m=m)
    dist = subspace_distance(found, target)
    # dimension-growth surrogate for the unreachable infinite-dimension
    # claims: a Blaschke entry truncated at the window scale keeps feeding
    # new model directions as the window widens, a monomial entry does not
    dims = []
    flat_dims = []
    for gn in p["growth_orders"]:
        d_b = gn - p["growth_margin"]
        grow = diag_inner(
            [monomial_inner(2, d_b), blaschke_scalar(BlaschkeSpec([0.5]), d_b)], d_b
        )
        dims.append(model_space(grow, gn, tol=tol).dim)
        flat = diag_inner([monomial_inner(2, 3), monomial_inner(3, 3)], 3)
        flat_dims.append(model_space(flat, gn, tol=tol).dim)
    increasing = all(a < b for a, b in zip(dims, dims[1:]))
    flat_constant = len(set(flat_dims)) == 1
    metrics = {
        "nearly_invariant_defect": nearly_cert.defect_dim,
        "defect_dim": cert.defect_dim,
        "expected_defect": rprime,
        "defect_span_distance": dist,
        "defect_span_threshold": p["span_tol"],
        "model_dim_growth": dims,
        "growth_strictly_increasing": increasing,
        "rational_model_dim_constant": flat_constant,
    }
    passed = (nearly_cert.defect_dim == 0 and cert.defect_dim == rprime
              and dist <= p["span_tol"] and increasing and flat_constant)
    return passed, metrics


def _sc_lemma_ortho(p: dict):
    tol = p["tol"]
    d, n = p["blaschke_deg"], p["N"]
    psi = diag_inner(
        [monomial_inner(3, d), blaschke_scalar(BlaschkeSpec([p["psi_zero"]]), d)], d
    )
    theta = diag_inner(
        [monomial_inner(2, d), blaschke_scalar(BlaschkeSpec([p["theta_zero"]]), d)], d
    )
    nk = n - d
    k_theta = model_space(theta, nk, tol=tol)
    lhs = complement(_apply_space(psi, k_theta, n, tol))
    prod = compose(psi, theta)
    rhs_parts = beurling_space(prod, n, tol=tol)
    rhs = from_spanning(
        list(rhs_parts.basis) + list(model_space(psi, n, tol=tol).basis), n, tol
    )
    band = n - 2 * d
    combined_tail = psi.tail_bound + theta.tail_bound + prod.tail_bound
    threshold = max(1e-8, 5.0 * combined_tail)
    dist = subspace_distance(lhs, rhs, band=band)

    # exact polynomial variant of the same identity
    psi_m = diag_inner([monomial_inner(1, 2), monomial_inner(2, 2)], 2)
    theta_m = diag_inner([monomial_inner(2, 2), monomial_inner(1, 2)], 2)
    nm = p["poly_N"]
    k_m = model_space(theta_m, nm - 2, tol=tol)
    lhs_m = complement(_apply_space(psi_m, k_m, nm, tol))
    rhs_m = from_spanning(
        list(beurling_space(compose(psi_m, theta_m), nm, tol=tol).basis)
        + list(model_space(psi_m, nm, tol=tol).basis),
        nm, tol,
    )
    dist_m = subspace_distance(lhs_m, rhs_m, band=nm - 4)
    metrics = {
        "distance": dist,
        "threshold": threshold,
        "combined_tail_bound": combined_tail,
        "comparison_band": band,
        "poly_distance": dist_m,
        "poly_threshold": p["poly_tol"],
    }
    return dist <= threshold and dist_m <= p["poly_tol"], metrics


def _sc_lemma_nearly(p: dict):
    tol = p["tol"]
    d, nk = p["blaschke_deg"], p["inner_N"]
    psi = diag_inner(
        [blaschke_scalar(BlaschkeSpec([p["zero1"]]), d),
         blaschke_scalar(BlaschkeSpec([p["zero2"]]), d)],
        d,
    )
    theta = diag_inner([monomial_inner(2, 3), monomial_inner(3, 3)], 3)
    k_theta = model_space(theta, nk, tol=tol)
    space = _apply_space(psi, k_theta, nk + d, tol)
    threshold = max(1e-8, 3.0 * psi.tail_bound)
    cert = certify_nearly(space, 0, tol=threshold)
    residual = cert.singular_values[0] if cert.singular_values else 0.0
    metrics = {
        "defect_dim": cert.defect_dim,
        "residual": residual,
        "threshold": threshold,
        "tail_bound": psi.tail_bound,
        "vanishing_slice_dim": vanishing_slice(space).dim,
    }
    return cert.defect_dim == 0 and residual <= threshold, metrics


def _sc_prop_perp_almost(p: dict):
    tol, n = p["tol"], p["N"]
    psi = diag_inner([monomial_inner(1, 2), monomial_inner(2, 2)], 2)
    theta = diag_inner([monomial_inner(2, 2), monomial_inner(1, 2)], 2)
    m = psi.m_out
    k_theta = model_space(theta, n - 2, tol=tol)
    x = complement(_apply_space(psi, k_theta, n, tol))
    domain = degree_slice(x, n - 1)
    cert = defect_of(x, "S", domain=domain, tol=p["defect_tol"])
    escapes = []
    for i in range(m):
        t = symbol_column(psi, i)
        escapes.append(t - project(x, t))
    target = from_spanning(escapes, n, tol)
    found = from_spanning(list(cert.defect_basis), n, tol, dim_m=m)
    dist = subspace_distance(found, target)
    metrics = {
        "defect_dim": cert.defect_dim,
        "expected_defect": m,
        "defect_span_distance": dist,
        "defect_span_threshold": p["span_tol"],
    }
    return cert.defect_dim == m and dist <= p["span_tol"], metrics


def _sc_counterexample(p: dict):
    tol, n, m = p["tol"], p["N"], p["m"]
    theta = diag_inner([monomial_inner(1, 1)] * m, 1)
    k_theta = model_space(theta, n, tol=tol)
    theta_k = _apply_space(theta, k_theta, n, tol)
    space = complement(theta_k)
    cert = certify_nearly(space, 0)
    raised = False
    step = 0
    residual = 0.0
    f = monomial_fn(m, 0, 2)
    try:
        decompose(space, [], f)
    except NotNearlyInvariantError as exc:
        raised = True
        step = exc.step
        residual = exc.residual
    metrics = {
        "certify_defect_dim": cert.defect_dim,
        "raised_not_nearly_invariant": raised,
        "step": step,
        "residual": residual,
        "residual_window": [0.99, 1.01],
    }
    passed = cert.defect_dim >= 1 and raised and 0.99 <= residual <= 1.01
    return passed, metrics


def _sc_wandering_bound(p: dict):
    tol, n, d = p["tol"], p["N"], p["blaschke_deg"]
    m1 = model_space(monomial_inner(2, 2), n, tol=tol)
    dim1 = wandering(m1).dim
    psi = diag_inner(
        [blaschke_scalar(BlaschkeSpec([0.5]), d),
         blaschke_scalar(BlaschkeSpec([1 / 3]), d)],
        d,
    )
    theta = diag_inner([monomial_inner(1, 1)] * 2, 1)
    k_theta = model_space(theta, p["inner_N"], tol=tol)
    m2 = _apply_space(psi, k_theta, p["inner_N"] + d, tol)
    dim2 = wandering(m2).dim
    m3 = from_spanning([monomial_fn(2, 0, 1), monomial_fn(2, 1, 2)], n, tol)
    dim3 = wandering(m3).dim
    metrics = {
        "scalar_model_wandering_dim": dim1,
        "blaschke_product_wandering_dim": dim2,
        "vanishing_space_wandering_dim": dim3,
    }
    passed = dim1 == 1 and dim2 == 2 and dim3 == 0
    return passed, metrics


def _roundtrip_config(r: int, pdim: int, m: int, degrees, nk: int, tol: float,
                      f0_cols=None):
    """One synthesis/extraction roundtrip; returns its metric block."""
    entries = [monomial_inner(k, max(degrees)) for k in degrees]
    k_space = model_space(diag_inner(entries, max(degrees)), nk, tol=tol)
    if f0_cols is None:
        f0_cols = [basis_vector(m, i) for i in range(r)]
    e_fns = [basis_vector(m, m - pdim + j) for j in range(pdim)]
    ambient = nk + 2
    space = synthesize_M(k_space, f0_cols, e_fns, ambient, tol=tol)
    cert = certify_nearly(space, pdim)
    extracted = extract_K(space, e_fns)
    dist = subspace_distance(extracted, k_space)
    gaps, iters, monotone, summable = [], [], True, 0.0
    bound = ambient + pdim + 8
    for b in space.basis:
        res = decompose(space, e_fns, b)
        gaps.append(res.norm_gap)
        iters.append(res.iterations)
        summable += sum(res.gk_norms)
        monotone = monotone and all(
            res.gk_norms[i + 1] <= res.gk_norms[i] + 1e-12
            for i in range(len(res.gk_norms) - 1)
        ) and res.converged
    return {
        "defect_dim": cert.defect_dim,
        "roundtrip_distance": dist,
        "max_norm_gap": max(gaps, default=0.0),
        "max_iterations": max(iters, default=0),
        "iteration_bound": bound,
        "gk_monotone_and_converged": monotone,
        "gk_norm_sum": summable,
    }


def _roundtrip_passed(block: dict, pdim: int, dist_tol: float, gap_tol: float) -> bool:
    return (
        block["defect_dim"] <= pdim
        and block["roundtrip_distance"] <= dist_tol
        and block["max_norm_gap"] <= gap_tol
        and block["max_iterations"] <= block["iteration_bound"]
        and block["gk_monotone_and_converged"]
    )


def _sc_main_defect1(p: dict):
    tol = p["tol"]
    if p["r"] is not None:
        nk = max(4, p["N"] - 2)
        r = p["r"]
        degrees = [2] * r + [2]
        configs = [(r, 1, r + 1, degrees, nk, None)]
    else:
        poly_col = make_fn(3, [[2 ** -0.5, 0, 0], [0, 2 ** -0.5, 0]])
        configs = [
            (1, 1, 2, (3, 2), p["NK"], None),
            (1, 1, 3, (3, 2), p["NK"], [poly_col]),
            (2, 1, 3, (2, 2, 3), p["NK"], None),
        ]
    metrics = {}
    passed = True
    for idx, (r, pdim, m, degrees, nk, f0) in enumerate(configs):
        block = _roundtrip_config(r, pdim, m, degrees, nk, tol, f0_cols=f0)
        ok = _roundtrip_passed(block, pdim, p["distance_tol"], p["gap_tol"])
        metrics[f"config{idx}_r{r}_p{pdim}"] = block | {"passed": ok}
        passed = passed and ok
    # defect basis merely normalized, not orthogonal to the space: the
    # synthesis is still nearly invariant with defect <= p
    k_space = model_space(
        diag_inner([monomial_inner(3, 3), monomial_inner(2, 3)], 3), p["NK"], tol=tol
    )
    slanted = make_fn(2, [[0, 2 ** -0.5], [0, 2 ** -0.5]])
    slanted_m = synthesize_M(k_space, [basis_vector(2, 0)], [slanted],
                             p["NK"] + 2, tol=tol, check=False)
    slant_cert = certify_nearly(slanted_m, 1)
    metrics["non_orthogonal_defect_dim"] = slant_cert.defect_dim
    passed = passed and slant_cert.defect_dim <= 1
    metrics["norm_gap"] = max(
        blk["max_norm_gap"] for key, blk in metrics.items() if key.startswith("config")
    )
    return passed, metrics


def _sc_main_defectp(p: dict):
    tol = p["tol"]
    if p["r"] is not None:
        nk = max(4, p["N"] - 2)
        r, pdim = p["r"], p["p"]
        degrees = [2] * r + [2] * pdim
        configs = [(r, pdim, r + pdim, degrees, nk, None)]
    else:
        configs = [
            (1, 2, 3, (3, 2, 1), p["NK"], None),
            (2, 2, 4, (2, 2, 1, 3), p["NK"], None),
            (0, 1, 1, (2,), 4, None),
        ]
    metrics = {}
    passed = True
    for idx, (r, pdim, m, degrees, nk, f0) in enumerate(configs):
        f0_cols = [] if r == 0 else None
        block = _roundtrip_config(r, pdim, m, degrees, nk, tol, f0_cols=f0_cols)
        ok = _roundtrip_passed(block, pdim, p["distance_tol"], p["gap_tol"])
        metrics[f"config{idx}_r{r}_p{pdim}"] = block | {"passed": ok}
        passed = passed and ok
    metrics["norm_gap"] = max(
        blk["max_norm_gap"] for key, blk in metrics.items() if key.startswith("config")
    )
    return passed, metrics


def _sc_corollary_almost(p: dict):
    tol, n = p["tol"], p["N"]
    h = make_fn(1, [[2 ** -0.5], [2 ** -0.5]])
    space = Subspace(1, n, (h,), tol)
    ok_none, res_none = almost_invariant_Sstar_check(space, [])
    partner = make_fn(1, [[2 ** -0.5], [-(2 ** -0.5)]])
    ok_with, res_with = almost_invariant_Sstar_check(space, [partner])
    nearly = certify_nearly(space, 0)
    model3 = model_space(monomial_inner(3, 3), n, tol=tol)
    ok_inv, res_inv = almost_invariant_Sstar_check(model3, [])
    metrics = {
        "vacuous_nearly_defect": nearly.defect_dim,
        "residual_without_defect": res_none,
        "expected_residual_without_defect": 0.5,
        "residual_with_defect": res_with,
        "invariant_model_residual": res_inv,
        "closed_form_tol": p["closed_form_tol"],
    }
    passed = (
        nearly.defect_dim == 0
        and not ok_none
        and abs(res_none - 0.5) <= p["closed_form_tol"]
        and ok_with
        and res_with <= p["closed_form_tol"]
        and ok_inv
        and res_inv <= p["closed_form_tol"]
    )
    return passed, metrics


def _random_unitary(rng, m: int) -> np.ndarray:
    a = rng.standard_normal((m, m)) + 1j * rng.standard_normal((m, m))
    q, r = np.linalg.qr(a)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def _sc_duality(p: dict):
    tol, n, m = p["tol"], p["N"], p["m"]
    rng = np.random.default_rng(p["seed"])
    agreements = 0
    forward_true = 0
    forward_false = 0
    for i in range(p["pairs"]):
        if i % 2 == 0:
            powers = [int(k) for k in rng.integers(1, 4, size=m)]
            theta = diag_inner([monomial_inner(k, max(powers)) for k in powers],
                               max(powers))
            base = model_space(theta, n, tol=tol)
            u_sym = MatSymbol(m, m, _random_unitary(rng, m).reshape(1, m, m))
            space = _apply_space(u_sym, base, n, tol)
        else:
            count = int(rng.integers(2, 5))
            space = from_spanning(
                [_random_fn(rng, m, n) for _ in range(count)], n, tol, dim_m=m
            )
        defect = [_perp_unit(rng, space, n)]
        lhs_res, _ = duality_residuals(space, defect)
        if lhs_res <= p["residual_tol"]:
            forward_true += 1
        else:
            forward_false += 1
        if duality_check(space, defect, tol=p["residual_tol"]):
            agreements += 1
    metrics = {
        "pairs": p["pairs"],
        "agreements": agreements,
        "forward_true_pairs": forward_true,
        "forward_false_pairs": forward_false,
    }
    passed = (
        agreements == p["pairs"]
        and forward_true >= p["min_each_direction"]
        and forward_false >= p["min_each_direction"]
    )
    return passed, metrics


def _sc_section4(p: dict):
    tol, nk = p["tol"], p["NK"]
    rng = np.random.default_rng(p["seed"])
    f0_col = make_fn(3, [[2 ** -0.5, 0, 0], [0, 2 ** -0.5, 0]])
    e_fn = basis_vector(3, 2)
    k_space = model_space(
        diag_inner([monomial_inner(3, 3), monomial_inner(2, 3)], 3), nk, tol=tol
    )
    ambient = nk + 2
    space = synthesize_M(k_space, [f0_col], [e_fn], ambient, tol=tol)
    k_perp = complement(k_space)
    inv_cert = defect_of(k_perp, "S", domain=degree_slice(k_perp, nk - 1), tol=1e-8)
    f0_sym = column_symbol(f0_col)
    e_syms = [column_symbol(e_fn)]
    members = 0
    nonmembers = 0
    agreements = 0
    for i in range(p["draws"]):
        g = _random_fn(rng, 3, ambient)
        if i % 2 == 0:
            h = g - project(space, g)
            if h.norm() < 1e-6:
                continue
            g = h * (1.0 / h.norm())
        claimed, _ = orthocomplement_membership(g, f0_sym, e_syms, k_perp,
                                                tol=p["membership_tol"])
        direct = project(space, g).norm() <= p["membership_tol"]
        if direct:
            members += 1
        else:
            nonmembers += 1
        if claimed == direct:
            agreements += 1
    total = members + nonmembers
    metrics = {
        "coordinate_complement_shift_defect": inv_cert.defect_dim,
        "draws": total,
        "agreements": agreements,
        "members": members,
        "nonmembers": nonmembers,
        "min_each_class": p["min_each_class"],
    }
    passed = (
        inv_cert.defect_dim == 0
        and agreements == total
        and members >= p["min_each_class"]
        and nonmembers >= p["min_each_class"]
    )
    return passed, metrics


# --------------------------------------------------------------------------
# registry

_MONO_DIAG_23 = {
    "kind": "diag",
    "entries": [{"kind": "monomial", "k": 2}, {"kind": "monomial", "k": 3}],
    "deg": 3,
}

SCENARIOS = {
    "beurling": (
        _sc_beurling,
        {"theta": _MONO_DIAG_23, "N": 16, "tol": DEFAULT_TOL, "distance_tol": 1e-10},
        "shift-invariant ranges of inner multipliers and their complements",
    ),
    "prop_F0K_almost": (
        _sc_prop_f0k_almost,
        {"m": 3, "rprime": 2, "N": 12, "tol": DEFAULT_TOL, "defect_tol": 1e-8,
         "span_tol": 1e-6, "growth_margin": 4, "growth_orders": [16, 32, 48]},
        "image of a model space under an isometric column map is almost "
        "shift-invariant with defect equal to the inner multiplier width",
    ),
    "lemma_orthocomplement": (
        _sc_lemma_ortho,
        {"blaschke_deg": 24, "N": 64, "psi_zero": 0.5, "theta_zero": -1 / 3,
         "poly_N": 12, "poly_tol": 1e-10, "tol": DEFAULT_TOL},
        "orthocomplement of a multiplied model space splits as product range "
        "plus outer model space",
    ),
    "lemma_nearly": (
        _sc_lemma_nearly,
        {"blaschke_deg": 24, "inner_N": 16, "zero1": 0.5, "zero2": 1 / 3,
         "tol": DEFAULT_TOL},
        "multiplied model spaces with non-vanishing diagonal at the origin "
        "are nearly backward-shift invariant (defect 0)",
    ),
    "prop_perp_almost": (
        _sc_prop_perp_almost,
        {"N": 12, "tol": DEFAULT_TOL, "defect_tol": 1e-8, "span_tol": 1e-9},
        "the orthocomplement of a multiplied model space is almost "
        "shift-invariant with defect equal to the ambient dimension",
    ),
    "counterexample": (
        _sc_counterexample,
        {"m": 2, "N": 12, "tol": DEFAULT_TOL},
        "an almost shift-invariant complement that is not nearly backward-"
        "shift invariant: the decomposition refuses with a unit escape",
    ),
    "wandering_bound": (
        _sc_wandering_bound,
        {"N": 10, "blaschke_deg": 16, "inner_N": 4, "tol": DEFAULT_TOL},
        "the origin-visible part of a subspace has dimension between 1 and "
        "the ambient vector dimension (0 only if everything vanishes)",
    ),
    "main_defect1": (
        _sc_main_defect1,
        {"NK": 6, "r": None, "N": 8, "tol": DEFAULT_TOL, "distance_tol": 1e-6,
         "gap_tol": 1e-6},
        "defect-1 synthesis/extraction roundtrip with Parseval norm identity",
    ),
    "main_defectp": (
        _sc_main_defectp,
        {"NK": 6, "r": None, "p": 2, "N": 8, "tol": DEFAULT_TOL,
         "distance_tol": 1e-6, "gap_tol": 1e-6},
        "defect-p synthesis/extraction roundtrip, including the all-"
        "vanishing (wandering-free) case",
    ),
    "corollary_almost": (
        _sc_corollary_almost,
        {"N": 4, "tol": DEFAULT_TOL, "closed_form_tol": 1e-10},
        "nearly invariant with defect vs almost invariant for the backward "
        "shift: the wandering vectors decide, with closed-form residuals",
    ),
    "duality": (
        _sc_duality,
        {"pairs": 50, "m": 2, "N": 8, "seed": 0, "tol": DEFAULT_TOL,
         "residual_tol": 1e-8, "min_each_direction": 10},
        "forward containment under the backward shift is equivalent to the "
        "complement containment under the compressed shift",
    ),
    "section4": (
        _sc_section4,
        {"NK": 6, "seed": 0, "draws": 100, "tol": DEFAULT_TOL,
         "membership_tol": 1e-7, "min_each_class": 20},
        "membership in the orthocomplement via coordinate adjoints matches "
        "direct projection on random draws",
    ),
}


def run_scenario(scenario_id: str, params: dict | None = None) -> ScenarioReport:
    """Run one named scenario and return its report."""
    if scenario_id not in SCENARIOS:
        raise ParseError(
            f"unknown scenario {scenario_id!r}; known: {sorted(SCENARIOS)}"
        )
    runner, defaults, _ = SCENARIOS[scenario_id]
    merged = _merge(defaults, params)
    start = time.perf_counter()
    passed, metrics = runner(merged)
    runtime_ms = (time.perf_counter() - start) * 1000.0
    return ScenarioReport(scenario_id, bool(passed), metrics, merged, runtime_ms)


def run_all(params: dict | None = None) -> list:
    """Run every scenario in fixed id order."""
    return [run_scenario(sid, params.get(sid) if params else None)
            for sid in SCENARIOS]


def _fmt(val) -> str:
    if isinstance(val, bool):
        return "yes" if val else "no"
    if isinstance(val, float):
        return f"{val:.3g}"
    return str(val)


def render_markdown(reports) -> str:
    """Claim/metric table for documentation."""
    lines = [
        "| scenario | verified statement | passed | metrics |",
        "| --- | --- | --- | --- |",
    ]
    for rep in reports:
        desc = SCENARIOS[rep.scenario_id][2]
        inline = ", ".join(f"{k}={_fmt(v)}" for k, v in rep.metrics.items()
                           if not isinstance(v, (list, dict)))
        nested = "; ".join(
            f"{k}: " + ", ".join(f"{kk}={_fmt(vv)}" for kk, vv in v.items())
            for k, v in rep.metrics.items() if isinstance(v, dict)
        )
        cell = inline if not nested else f"{inline}; {nested}" if inline else nested
        lines.append(
            f"| {rep.scenario_id} | {desc} | {'PASS' if rep.passed else 'FAIL'} | {cell} |"
        )
    return "\n".join(lines)
