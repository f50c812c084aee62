"""Theorem-suite orchestration over (group, normal subgroup, character) cases.

Each theorem check evaluates one identity on batches of random test functions
and reports the max-norm residual: a single violated sample fails the check.
Checks are driven by per-case operator matrices built from the character's
value table, which is where the test-only corruption hook plugs in; the unit
tests pin those matrices against the public operations.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .characters import Character, enumerate_characters
from .covariant import _nullspace_rows
from .errors import NotNormal, UnknownTheorem
from .groups import FiniteGroup, Subgroup, enumerate_normal_subgroups
from .haar import HaarData, sigma_n

SUITE_VERSION = "1.0.0"
FINITE_TOL = 1e-9

THEOREM_IDS = (
    "adjointness",
    "compact_norm",
    "contraction",
    "duality",
    "infimum",
    "intertwine_L",
    "intertwine_R",
    "kernel_closure",
    "left_char_formula",
    "normal_formula",
    "quotient_isometry",
    "sigma_relation",
    "surjectivity",
    "weil",
)


@dataclass
class TheoremReport:
    """Outcome of one theorem check on one (group, subgroup, character) case."""

    group: str
    subgroup: tuple[int, ...]
    character: dict
    theorem_id: str
    status: str
    residual: float
    samples: int
    tolerance: float
    detail: str = ""

    @property
    def case_key(self) -> tuple:
        return (
            self.group,
            self.subgroup,
            self.character["modulus"],
            tuple(sorted(self.character["exponents"].items())),
        )

    def as_dict(self) -> dict:
        return {
            "id": self.theorem_id,
            "status": self.status,
            "residual": self.residual,
            "samples": self.samples,
            "tolerance": self.tolerance,
            "detail": self.detail,
        }


def _snap_rational(x: np.ndarray) -> np.ndarray:
    return np.round(x * 16.0) / 16.0


class CaseContext:
    """Precomputed data for one (group, normal subgroup, character) case.

    ``corrupt=True`` flips the sign of one character exponent inside the
    check machinery only (the Character type itself would reject the broken
    exponent map); this is the non-vacuity hook used by the tests.
    """

    def __init__(self, g: FiniteGroup, n: Subgroup, xi: Character,
                 haar: HaarData, corrupt: bool = False):
        if not n.is_normal:
            raise NotNormal(f"subgroup {list(n.members)} is not normal in {g.name}")
        self.g = g
        self.n = n
        self.xi = xi
        self.haar = haar
        self.decomp = n.cosets
        self.members = np.array(n.members, dtype=np.int64)
        self.reps = self.decomp.representatives
        self.n_cosets = self.decomp.n_cosets
        vals = xi.values_on_members().copy()
        if corrupt:
            pos = self._corruptible_position()
            vals[pos] = np.conj(vals[pos])
        self.xi_vals = vals
        # position of each group element inside the member list (-1 outside N)
        self.pos_in_n = np.full(g.order, -1, dtype=np.int64)
        self.pos_in_n[self.members] = np.arange(len(self.members))
        rows = np.arange(g.order)
        m = np.zeros((g.order, g.order), dtype=np.complex128)
        for pos, s in enumerate(self.members):
            m[rows, g.table[:, s]] = haar.v * np.conj(vals[pos])
        self.op = m
        self._kernel_rows = None
        self._linfty_rows = None

    def _corruptible_position(self) -> int:
        m = self.xi.modulus
        exps = self.xi.exponents
        for pos, e in enumerate(exps):
            if e % m and (2 * e) % m:  # prefer a non-real value
                return pos
        for pos, e in enumerate(exps):
            if e % m:
                return pos
        raise ValueError("the trivial character has no exponent to corrupt")

    # random inputs ---------------------------------------------------------

    def random_batch(self, rng: np.random.Generator, count: int) -> np.ndarray:
        re = _snap_rational(rng.uniform(-1.0, 1.0, (self.g.order, count)))
        im = _snap_rational(rng.uniform(-1.0, 1.0, (self.g.order, count)))
        return re + 1j * im

    def covariant_batch(self, rng: np.random.Generator, count: int) -> np.ndarray:
        """Random covariant functions, built from free values on representatives."""
        re = _snap_rational(rng.uniform(-1.0, 1.0, (self.n_cosets, count)))
        im = _snap_rational(rng.uniform(-1.0, 1.0, (self.n_cosets, count)))
        free = re + 1j * im
        psi = np.zeros((self.g.order, count), dtype=np.complex128)
        idx = self.g.table[np.ix_(self.reps, self.members)]
        block = free[:, None, :] * self.xi_vals[None, :, None]
        psi[idx.reshape(-1), :] = block.reshape(-1, count)
        return psi

    # batched helpers --------------------------------------------------------

    def lift_batch(self, psi: np.ndarray) -> np.ndarray:
        out = np.zeros_like(psi)
        out[self.reps, :] = psi[self.reps, :] / self.haar.v
        return out

    def norm_one_batch(self, psi: np.ndarray) -> np.ndarray:
        return self.haar.w * np.abs(psi[self.reps, :]).sum(axis=0)

    def l1_batch(self, f: np.ndarray) -> np.ndarray:
        return self.haar.u * np.abs(f).sum(axis=0)

    def kernel_rows(self) -> np.ndarray:
        if self._kernel_rows is None:
            self._kernel_rows = _nullspace_rows(self.op[self.reps, :])
        return self._kernel_rows

    def linfty_rows(self) -> np.ndarray:
        if self._linfty_rows is None:
            g = self.g
            eye = np.eye(g.order, dtype=np.complex128)
            blocks = []
            for pos, k in enumerate(self.members):
                if k == g.identity:
                    continue
                blocks.append(eye[g.table[:, k]] - self.xi_vals[pos] * eye)
            if blocks:
                self._linfty_rows = _nullspace_rows(np.vstack(blocks))
            else:
                self._linfty_rows = np.eye(g.order, dtype=np.complex128)
        return self._linfty_rows


def _rows_match_residual(a: np.ndarray, b: np.ndarray) -> float:
    """Mutual projection defect for two orthonormal row families."""
    res = 0.0
    for x, y in ((a, b), (b, a)):
        if x.shape[0] == 0:
            continue
        if y.shape[0] == 0:
            res = max(res, 1.0)
            continue
        defect = x - (x @ y.conj().T) @ y
        res = max(res, float(np.sqrt((np.abs(defect) ** 2).sum(axis=1)).max()))
    return res


# ---------------------------------------------------------------------------
# the fourteen checks; each returns (residual, samples, detail)
# ---------------------------------------------------------------------------

def _check_weil(ctx: CaseContext, rng, trials):
    f = ctx.random_batch(rng, trials)
    idx = ctx.g.table[np.ix_(ctx.reps, ctx.members)]
    t_n = ctx.haar.v * f[idx.reshape(-1), :].reshape(ctx.n_cosets, len(ctx.members), trials).sum(axis=1)
    lhs = ctx.haar.w * t_n.sum(axis=0)
    rhs = ctx.haar.u * f.sum(axis=0)
    return float(np.abs(lhs - rhs).max()), trials, ""


def _check_sigma_relation(ctx: CaseContext, rng, trials):
    g, n, haar = ctx.g, ctx.n, ctx.haar
    res = 0.0
    q = ctx.decomp.coset_of
    for x in range(g.order):
        measured = sigma_n(g, n, x)
        res = max(res, abs(haar.delta_G(x) - measured * haar.delta_quotient(int(q[x]))))
    for t in n.members:
        res = max(res, abs(sigma_n(g, n, t) - haar.delta_N(t)))
    return float(res), g.order + len(n.members), ""


def _check_intertwine_r(ctx: CaseContext, rng, trials):
    f = ctx.random_batch(rng, trials)
    psi = ctx.op @ f
    res = 0.0
    for pos, k in enumerate(ctx.members):
        rf = f[ctx.g.table[:, k], :]
        factor = ctx.haar.delta_N(ctx.g.inv(k)) * ctx.xi_vals[pos]
        res = max(res, float(np.abs(ctx.op @ rf - factor * psi).max()))
    return res, trials * len(ctx.members), ""


def _check_intertwine_l(ctx: CaseContext, rng, trials):
    f = ctx.random_batch(rng, trials)
    psi = ctx.op @ f
    res = 0.0
    for y in range(ctx.g.order):
        perm = ctx.g.table[ctx.g.inverse[y]]
        res = max(res, float(np.abs(ctx.op @ f[perm, :] - psi[perm, :]).max()))
    return res, trials * ctx.g.order, ""


def _check_normal_formula(ctx: CaseContext, rng, trials):
    g, haar = ctx.g, ctx.haar
    all_x = np.arange(g.order)
    sigma = np.array([haar.sigma_N(x) for x in range(g.order)])
    m2 = np.zeros_like(ctx.op)
    for s in ctx.members:
        conj_elems = g.table[g.table[g.inverse, s], all_x]
        coeff = sigma * haar.v * np.conj(ctx.xi_vals[ctx.pos_in_n[conj_elems]])
        m2[all_x, g.table[s, all_x]] = coeff
    f = ctx.random_batch(rng, trials)
    res = float(np.abs(ctx.op @ f - m2 @ f).max())
    return res, trials, ""


def _check_left_char_formula(ctx: CaseContext, rng, trials):
    g = ctx.g
    all_x = np.arange(g.order)
    f = ctx.random_batch(rng, trials)
    psi = ctx.op @ f
    res = 0.0
    for k in ctx.members:
        perm = g.table[g.inverse[k]]
        conj_elems = g.table[g.table[g.inverse, k], all_x]
        factor = np.conj(ctx.xi_vals[ctx.pos_in_n[conj_elems]])
        res = max(res, float(np.abs(ctx.op @ f[perm, :] - factor[:, None] * psi).max()))
    return res, trials * len(ctx.members), ""


def _check_adjointness(ctx: CaseContext, rng, trials):
    f = ctx.random_batch(rng, trials)
    g2 = ctx.random_batch(rng, trials)
    lhs = ctx.haar.u * ((ctx.op @ f).T @ np.conj(g2))
    rhs = ctx.haar.u * (f.T @ np.conj(ctx.op @ g2))
    return float(np.abs(lhs - rhs).max()), trials * trials, ""


def _check_compact_norm(ctx: CaseContext, rng, trials):
    psi = ctx.covariant_batch(rng, trials)
    lam_n = ctx.haar.v * len(ctx.members)
    res = np.abs(ctx.l1_batch(psi) - lam_n * ctx.norm_one_batch(psi)).max()
    return float(res), trials, ""


def _check_contraction(ctx: CaseContext, rng, trials):
    f = ctx.random_batch(rng, trials)
    gap = ctx.norm_one_batch(ctx.op @ f) - ctx.l1_batch(f)
    return float(max(0.0, gap.max())), trials, ""


def _kernel_perturbation_gain(ctx: CaseContext, rng, base: np.ndarray,
                              reference: np.ndarray) -> float:
    """Largest violation of reference <= l1(base + kernel perturbation)."""
    k = ctx.kernel_rows()
    if k.shape[0] == 0:
        return 0.0
    gain = 0.0
    count = base.shape[1]
    for scale in (0.1, 1.0, 3.0):
        z = rng.standard_normal((k.shape[0], count)) + 1j * rng.standard_normal((k.shape[0], count))
        cand = base + k.T @ (scale * z)
        gain = max(gain, float((reference - ctx.l1_batch(cand)).max()))
    return max(0.0, gain)


def _check_infimum(ctx: CaseContext, rng, trials):
    psi = ctx.covariant_batch(rng, trials)
    lift = ctx.lift_batch(psi)
    target = ctx.norm_one_batch(psi)
    res = float(np.abs(ctx.l1_batch(lift) - target).max())
    res = max(res, float(np.abs(ctx.op @ lift - psi).max()))
    res = max(res, _kernel_perturbation_gain(ctx, rng, lift, target))
    return res, trials, ""


def _check_quotient_isometry(ctx: CaseContext, rng, trials):
    f = ctx.random_batch(rng, trials)
    psi = ctx.op @ f
    qn = ctx.norm_one_batch(psi)
    lift = ctx.lift_batch(psi)
    res = float(np.abs(ctx.l1_batch(lift) - qn).max())
    # the witness sits in the same kernel coset as f
    res = max(res, float(np.abs(ctx.op @ (f - lift)).max()))
    res = max(res, _kernel_perturbation_gain(ctx, rng, f, qn))
    return res, trials, ""


def _check_kernel_closure(ctx: CaseContext, rng, trials):
    rep_kernel = ctx.kernel_rows()
    full_kernel = _nullspace_rows(ctx.op)
    res = _rows_match_residual(rep_kernel, full_kernel)
    res = max(res, float(abs(rep_kernel.shape[0] - full_kernel.shape[0])))
    return res, rep_kernel.shape[0] + full_kernel.shape[0], ""


def _check_duality(ctx: CaseContext, rng, trials):
    annihilator = _nullspace_rows(np.conj(ctx.kernel_rows()))
    linfty = ctx.linfty_rows()
    res = _rows_match_residual(annihilator, linfty)
    res = max(res, float(abs(annihilator.shape[0] - ctx.n_cosets)))
    res = max(res, float(abs(linfty.shape[0] - ctx.n_cosets)))
    return res, annihilator.shape[0] + linfty.shape[0], ""


def _check_surjectivity(ctx: CaseContext, rng, trials):
    dim_defect = abs(ctx.kernel_rows().shape[0] + ctx.n_cosets - ctx.g.order)
    psi = ctx.covariant_batch(rng, trials)
    witness = float(np.abs(ctx.op @ ctx.lift_batch(psi) - psi).max())
    return max(float(dim_defect), witness), trials, ""


_CHECKS = {
    "adjointness": _check_adjointness,
    "compact_norm": _check_compact_norm,
    "contraction": _check_contraction,
    "duality": _check_duality,
    "infimum": _check_infimum,
    "intertwine_L": _check_intertwine_l,
    "intertwine_R": _check_intertwine_r,
    "kernel_closure": _check_kernel_closure,
    "left_char_formula": _check_left_char_formula,
    "normal_formula": _check_normal_formula,
    "quotient_isometry": _check_quotient_isometry,
    "sigma_relation": _check_sigma_relation,
    "surjectivity": _check_surjectivity,
    "weil": _check_weil,
}

assert tuple(sorted(_CHECKS)) == THEOREM_IDS


# ---------------------------------------------------------------------------
# case and suite drivers
# ---------------------------------------------------------------------------

def _case_rng(seed: int, case_index: int, theorem_index: int) -> np.random.Generator:
    return np.random.default_rng(
        np.random.SeedSequence([int(seed), int(case_index), int(theorem_index)])
    )


def run_case(g: FiniteGroup, n: Subgroup, xi: Character, haar: HaarData,
             trials: int, seed: int, case_index: int = 0,
             tolerance: float = FINITE_TOL, corrupt: bool = False) -> list[TheoremReport]:
    """Run all theorem checks for one case; deterministic for a fixed seed."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    ctx = CaseContext(g, n, xi, haar, corrupt=corrupt)
    reports = []
    char_doc = xi.serialize()
    for t_index, tid in enumerate(THEOREM_IDS):
        rng = _case_rng(seed, case_index, t_index)
        residual, samples, detail = _CHECKS[tid](ctx, rng, trials)
        status = "pass" if residual <= tolerance else "fail"
        if status == "fail" and not detail:
            detail = f"residual {residual:.6e} exceeds tolerance {tolerance:.1e}"
        reports.append(TheoremReport(
            group=g.name,
            subgroup=n.members,
            character=char_doc,
            theorem_id=tid,
            status=status,
            residual=float(residual),
            samples=int(samples),
            tolerance=float(tolerance),
            detail=detail,
        ))
    return reports


def verify_theorem(theorem_id: str, g: FiniteGroup, n: Subgroup, xi: Character,
                   haar: HaarData, trials: int, seed: int,
                   tolerance: float = FINITE_TOL) -> TheoremReport:
    """Run exactly one named check; deterministic for a fixed seed."""
    if theorem_id not in _CHECKS:
        raise UnknownTheorem(
            f"unknown theorem id {theorem_id!r}; known: {', '.join(THEOREM_IDS)}"
        )
    ctx = CaseContext(g, n, xi, haar)
    rng = _case_rng(seed, 0, THEOREM_IDS.index(theorem_id))
    residual, samples, detail = _CHECKS[theorem_id](ctx, rng, trials)
    status = "pass" if residual <= tolerance else "fail"
    return TheoremReport(
        group=g.name, subgroup=n.members, character=xi.serialize(),
        theorem_id=theorem_id, status=status, residual=float(residual),
        samples=int(samples), tolerance=float(tolerance), detail=detail,
    )


def suite_cases(g: FiniteGroup) -> list[tuple[Subgroup, Character]]:
    """All (normal subgroup, character) pairs of g in deterministic order."""
    cases = []
    for n in enumerate_normal_subgroups(g):
        for xi in enumerate_characters(n):
            cases.append((n, xi))
    return cases


def run_suite(g: FiniteGroup, haar: HaarData, trials: int, seed: int,
              tolerance: float = FINITE_TOL) -> list[TheoremReport]:
    """Every check for every normal subgroup and character of g."""
    reports = []
    for index, (n, xi) in enumerate(suite_cases(g)):
        reports.extend(run_case(g, n, xi, haar, trials, seed,
                                case_index=index, tolerance=tolerance))
    reports.sort(key=lambda r: (r.case_key, r.theorem_id))
    return reports


# ---------------------------------------------------------------------------
# report documents
# ---------------------------------------------------------------------------

def report_document(reports: list[TheoremReport], seed: int,
                    haar: HaarData | None = None,
                    extra: dict | None = None) -> dict:
    """Assemble the report JSON document, grouped by case."""
    cases: dict[tuple, dict] = {}
    for r in sorted(reports, key=lambda r: (r.case_key, r.theorem_id)):
        entry = cases.setdefault(r.case_key, {
            "case_key": {
                "group": r.group,
                "subgroup": list(r.subgroup),
                "character": r.character,
            },
            "theorems": [],
        })
        entry["theorems"].append(r.as_dict())
    doc = {
        "suite_version": SUITE_VERSION,
        "seed": int(seed),
        "rng": "numpy PCG64, SeedSequence([seed, case_index, theorem_index])",
        "cases": [cases[k] for k in sorted(cases)],
    }
    if haar is not None:
        doc["weights"] = haar.serialize()
    if extra:
        doc.update(extra)
    return doc


def render_json(doc: dict) -> str:
    """Byte-stable JSON rendering (sorted keys, fixed layout)."""
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def render_text(doc: dict) -> str:
    """Human-readable summary table of a report document."""
    lines = []
    total = passed = 0
    for case in doc.get("cases", []):
        key = case["case_key"]
        subgroup = key.get("subgroup", [])
        head = f"{key.get('group', '?')}  N={subgroup}  character={key.get('character', {})}"
        lines.append(head)
        for t in case["theorems"]:
            total += 1
            passed += t["status"] == "pass"
            lines.append(
                f"  {t['status']:>4}  {t['id']:<18} residual={t['residual']:.3e}"
                f"  tol={t['tolerance']:.1e}  samples={t['samples']}"
            )
    lines.append(f"{passed}/{total} checks passed")
    return "\n".join(lines) + "\n"


def all_passed(doc: dict) -> bool:
    return all(
        t["status"] == "pass"
        for case in doc.get("cases", [])
        for t in case["theorems"]
    )
