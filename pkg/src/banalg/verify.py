"""Theorem-check harness over generated fixture families.

Each check emits one Record with a residual and a PASS/FAIL/SKIP verdict;
SKIP marks fixtures whose hypotheses do not hold for the check (never an
error).  Check names carry the fixture name so a report is a flat, sorted,
byte-stable list.
"""

from __future__ import annotations

import concurrent.futures
import os
from dataclasses import dataclass, field

import numpy as np

from .algebra import operator_norm, validate
from .bse import (
    bse_norm_dual,
    bse_norm_primal,
    check_bse_property,
    delta_weak_bai,
    sigma_extension,
    split_sigma,
    theta,
    theta_product_residual,
    verify_product_bse,
)
from .constructions import (
    direct_sum,
    group_character_values,
    ideal_span_is_full,
    phi_isomorphism,
)
from .errors import BanalgError, SpanConditionError
from .fixtures import FAMILIES, Fixture, build_fixture, fixture_rng
from .jsonio import render_json
from .multipliers import (
    block_space,
    blocks_from_vector,
    decompose_left_multiplier,
    left_multiplier_residual,
    left_multiplier_space,
    multiplier_space,
    recompose,
)
from .spectra import (
    Character,
    CharacterSet,
    characters_lau,
    characters_numerical,
    characters_semidirect,
    match_character_sets,
    psi_of,
)

THEOREMS = ("lemma21", "prop24", "lemma41", "theta", "tim2", "lau-bse", "sub")

_THEOREM_HELP = {
    "lemma21": "left-multiplier four-block decomposition equivalence",
    "prop24": "character space union split (E and F, disjoint)",
    "lemma41": "BSE-norm additivity of the split/join of product functions",
    "theta": "isometric multiplicative pairing (tau, rho) -> sigma",
    "tim2": "direct-sum BSE biconditional and multiplier block split",
    "lau-bse": "lau-product BSE biconditional and multiplier transport",
    "sub": "extension of subalgebra BSE-functions across the ideal",
}


@dataclass
class Record:
    name: str
    anchor: str
    residual: float
    verdict: str  # PASS | FAIL | SKIP
    detail: str = ""

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "anchor": self.anchor,
            "residual": float(self.residual),
            "verdict": self.verdict,
            "detail": self.detail,
        }


@dataclass
class RunConfig:
    tol_algebraic: float = 1e-9
    tol_opt: float = 1e-6
    seed: int = 0
    families: tuple[str, ...] = FAMILIES
    count: int = 2
    max_dim: int = 5
    sigma_samples: int = 4
    jobs: int = 1

    def __post_init__(self):
        if self.tol_algebraic <= 0 or self.tol_opt <= 0:
            raise ValueError("tolerances must be positive")
        if self.count < 1:
            raise ValueError("count must be >= 1")
        if not 1 <= self.max_dim <= 16:
            raise ValueError("max_dim must stay at desk scale (1..16)")
        unknown = set(self.families) - set(FAMILIES)
        if unknown:
            raise ValueError(f"unknown fixture families: {sorted(unknown)}")

    def to_dict(self) -> dict:
        return {
            "tol_algebraic": self.tol_algebraic,
            "tol_opt": self.tol_opt,
            "seed": self.seed,
            "families": list(self.families),
            "count": self.count,
            "max_dim": self.max_dim,
            "sigma_samples": self.sigma_samples,
        }


@dataclass
class Report:
    config: RunConfig
    records: list[Record] = field(default_factory=list)

    @property
    def counts(self) -> dict:
        out = {"PASS": 0, "FAIL": 0, "SKIP": 0}
        for r in self.records:
            out[r.verdict] = out.get(r.verdict, 0) + 1
        return out

    @property
    def ok(self) -> bool:
        return self.counts["FAIL"] == 0

    def to_dict(self) -> dict:
        return {
            "config": self.config.to_dict(),
            "records": [r.to_dict() for r in self.records],
            "summary": self.counts,
        }

    def to_json(self) -> str:
        return render_json(self.to_dict()) + "\n"

    def to_text(self, color: bool | None = None) -> str:
        if color is None:
            color = os.environ.get("BANALG_NO_COLOR", "") == ""
        paint = {
            "PASS": "\x1b[32mPASS\x1b[0m" if color else "PASS",
            "FAIL": "\x1b[31mFAIL\x1b[0m" if color else "FAIL",
            "SKIP": "\x1b[33mSKIP\x1b[0m" if color else "SKIP",
        }
        lines = []
        for r in self.records:
            extra = f"  ({r.detail})" if r.detail else ""
            lines.append(
                f"{paint[r.verdict]}  {r.name:<48} {r.anchor:<10} "
                f"residual {r.residual:.3e}{extra}"
            )
        c = self.counts
        lines.append(f"{c['PASS']} passed, {c['FAIL']} failed, {c['SKIP']} skipped")
        return "\n".join(lines) + "\n"


def _rec(records: list[Record], name: str, anchor: str, residual: float,
         tol: float, detail: str = ""):
    verdict = "PASS" if residual <= tol else "FAIL"
    records.append(Record(name, anchor, float(residual), verdict, detail))


def _skip(records: list[Record], name: str, anchor: str, detail: str):
    records.append(Record(name, anchor, 0.0, "SKIP", detail))


def _random_sigma(rng: np.random.Generator, k: int) -> np.ndarray:
    return rng.standard_normal(k) + 1j * rng.standard_normal(k)


def _duality_checks(records, fix: Fixture, S: CharacterSet, cfg: RunConfig,
                    rng: np.random.Generator):
    worst = 0.0
    for _ in range(cfg.sigma_samples):
        sigma = _random_sigma(rng, len(S))
        fn = bse_norm_primal(sigma, S, fix.algebra)
        dual, cert = bse_norm_dual(sigma, S, fix.algebra)
        worst = max(worst, abs(fn.bse_norm - dual) / max(1.0, fn.bse_norm))
        worst = max(worst, fn.interpolation_error())
        worst = max(worst, max(0.0, fn.certificate_feasibility() - 1.0))
    _rec(records, f"{fix.name}/bse-duality", "duality", worst, cfg.tol_opt)
    bai = delta_weak_bai(fix.algebra, S)
    _rec(records, f"{fix.name}/delta-weak-bai", "bai", bai.residual, cfg.tol_opt,
         detail=f"norm {bai.norm:.6g}")


def _bse_verdict_check(records, fix: Fixture, S: CharacterSet, cfg: RunConfig):
    v = check_bse_property(fix.algebra, cfg.tol_algebraic, seed=cfg.seed, S=S)
    if not v.semisimple:
        _skip(records, f"{fix.name}/check-bse", "bse-def",
              "outside hypotheses: not semisimple")
        return
    res = max(v.containment_m_in_c, v.containment_c_in_m)
    _rec(records, f"{fix.name}/check-bse", "bse-def", res, cfg.tol_algebraic,
         detail=f"is_bse={v.is_bse}")


def _block_checks(records, fix: Fixture, cfg: RunConfig):
    desc = fix.descriptor
    lm = left_multiplier_space(fix.algebra)
    worst_rel = 0.0
    for T in lm.basis:
        dec = decompose_left_multiplier(T, desc, cfg.tol_algebraic)
        worst_rel = max(worst_rel, dec.max_relation_residual,
                        dec.max_membership_residual)
    _rec(records, f"{fix.name}/lemma-decompose", "lemma21", worst_rel,
         cfg.tol_algebraic, detail=f"dim LM = {lm.dim}")
    bs = block_space(desc)
    dim_gap = abs(bs.shape[0] - lm.dim)
    _rec(records, f"{fix.name}/lemma-block-dim", "lemma21", float(dim_gap), 0.0,
         detail=f"block space {bs.shape[0]} vs LM {lm.dim}")
    worst_rec = 0.0
    for vec in bs:
        blocks = blocks_from_vector(vec, desc)
        T = recompose(blocks, desc, cfg.tol_algebraic)
        worst_rec = max(worst_rec, left_multiplier_residual(fix.algebra, T.matrix))
    _rec(records, f"{fix.name}/lemma-recompose", "lemma21", worst_rec,
         cfg.tol_algebraic)
    # multipliers of the product split with S_B = 0 under the full span condition
    if ideal_span_is_full(desc):
        worst_sb = 0.0
        for T in multiplier_space(fix.algebra).basis:
            dec = decompose_left_multiplier(T, desc, cfg.tol_algebraic)
            worst_sb = max(worst_sb, float(np.max(np.abs(dec.S_B), initial=0.0)))
        _rec(records, f"{fix.name}/multiplier-sb-zero", "sub", worst_sb,
             cfg.tol_algebraic)
    else:
        _skip(records, f"{fix.name}/multiplier-sb-zero", "sub",
              "<IB> span is not full")


def _semidirect_checks(records, fix: Fixture, cfg: RunConfig,
                       rng: np.random.Generator):
    desc = fix.descriptor
    sdc = characters_semidirect(desc, cfg.tol_algebraic, seed=cfg.seed)
    _rec(records, f"{fix.name}/characters-union", "prop24",
         sdc.cross_check_distance, 1e-8,
         detail=f"|E|={sdc.e_count} |F|={len(sdc.subalgebra_chars)}")
    card_gap = abs(len(sdc.set) - (len(sdc.subalgebra_chars) + len(sdc.ideal_chars)))
    ideal_part = np.abs(sdc.set.matrix[:, desc.ideal_slice])
    e_rows = ideal_part[: sdc.e_count]
    f_rows = ideal_part[sdc.e_count :]
    disjoint_res = float(np.max(f_rows, initial=0.0))
    if sdc.e_count and e_rows.size and float(np.min(np.max(e_rows, axis=1))) <= 1e-6:
        disjoint_res = 1.0  # an E character with vanishing ideal part would collide with F
    _rec(records, f"{fix.name}/characters-disjoint", "prop24",
         float(card_gap) + disjoint_res, cfg.tol_algebraic)

    # psi well-definedness and the factorization identity
    worst_disc = 0.0
    worst_id = 0.0
    alg = desc.algebra
    bsl, isl = desc.subalgebra_slice, desc.ideal_slice
    for r, phi in enumerate(sdc.ideal_chars):
        psi_vals, disc = psi_of(phi, desc, cfg.tol_algebraic)
        worst_disc = max(worst_disc, disc)
        psi = np.zeros(desc.subalgebra.dim, dtype=complex) if psi_vals is None else psi_vals
        for i in range(isl.start, isl.stop):
            for j in range(bsl.start, bsl.stop):
                prod = alg.structure[i, j, :][isl]  # (a b) in ideal coordinates
                lhs = complex(phi.values @ prod)
                rhs = phi.values[i - isl.start] * psi[j - bsl.start]
                worst_id = max(worst_id, abs(lhs - rhs))
    _rec(records, f"{fix.name}/psi-uniqueness", "prop24", worst_disc, 1e-12)
    _rec(records, f"{fix.name}/psi-identity", "prop24", worst_id, 1e-10)

    _block_checks(records, fix, cfg)

    # sigma extension needs the full span hypothesis
    try:
        rho = _random_sigma(rng, len(sdc.subalgebra_chars))
        ext = sigma_extension(rho, sdc)
        res = max(ext.norm_slack, ext.witness_error)
        _rec(records, f"{fix.name}/sigma-extension", "sub", res, cfg.tol_opt,
             detail=f"|sigma|={ext.sigma.bse_norm:.6g} <= |rho|={ext.rho.bse_norm:.6g}")
    except SpanConditionError as exc:
        _skip(records, f"{fix.name}/sigma-extension", "sub", str(exc))

    _duality_checks(records, fix, sdc.set, cfg, rng)
    _bse_verdict_check(records, fix, sdc.set, cfg)


def _lau_checks(records, fix: Fixture, cfg: RunConfig, rng: np.random.Generator):
    desc = fix.descriptor
    lc = characters_lau(desc, cfg.tol_algebraic, seed=cfg.seed)
    _rec(records, f"{fix.name}/characters-union", "prop24",
         lc.cross_check_distance, 1e-8,
         detail=f"|E|={lc.e_count} |F|={len(lc.b_chars)}")
    card_gap = abs(len(lc.set) - (len(lc.a_chars) + len(lc.b_chars)))
    first_part = np.abs(lc.set.matrix[:, desc.first_slice])
    f_rows = first_part[lc.e_count :]
    disjoint_res = float(np.max(f_rows, initial=0.0))
    _rec(records, f"{fix.name}/characters-disjoint", "prop24",
         float(card_gap) + disjoint_res, cfg.tol_algebraic)

    _block_checks(records, fix, cfg)

    # the block isomorphism and its certified norm bound
    iso = phi_isomorphism(desc.first, desc.second, desc.phi, cfg.tol_algebraic)
    bound_excess = operator_norm(iso.forward) - iso.norm_bound
    _rec(records, f"{fix.name}/phi-iso-norm", "lau-bse", max(0.0, bound_excess),
         1e-12,
         detail=f"|Phi| = {operator_norm(iso.forward):.6g} <= {iso.norm_bound:.6g}")

    surjective = bool(fix.meta.get("surjective", True)) and all(
        g is not None for g in lc.gamma
    )
    if surjective:
        worst_split = 0.0
        worst_theta = 0.0
        worst_mult = 0.0
        for _ in range(cfg.sigma_samples):
            sigma = _random_sigma(rng, len(lc.set))
            sp = split_sigma(sigma, lc)
            worst_split = max(worst_split, sp.norm_slack)  # <= 0 up to solver gap
            tau = _random_sigma(rng, len(lc.a_chars))
            rho = _random_sigma(rng, len(lc.b_chars))
            th = theta(tau, rho, lc)
            worst_theta = max(worst_theta, th.isometry_defect)
            worst_mult = max(
                worst_mult,
                theta_product_residual(
                    lc, tau, rho,
                    _random_sigma(rng, len(lc.a_chars)),
                    _random_sigma(rng, len(lc.b_chars)),
                ),
            )
        _rec(records, f"{fix.name}/split-norm-additive", "lemma41",
             worst_split, cfg.tol_opt)
        _rec(records, f"{fix.name}/theta-isometry", "theta", worst_theta, cfg.tol_opt)
        _rec(records, f"{fix.name}/theta-multiplicative", "theta", worst_mult, 1e-10)
    else:
        _skip(records, f"{fix.name}/split-norm-additive", "lemma41",
              "phi is not surjective")
        _skip(records, f"{fix.name}/theta-isometry", "theta", "phi is not surjective")
        _skip(records, f"{fix.name}/theta-multiplicative", "theta",
              "phi is not surjective")

    rep = verify_product_bse(desc, cfg.tol_algebraic, cfg.tol_opt, cfg.seed)
    _rec(records, f"{fix.name}/lau-bse-biconditional", "lau-bse",
         0.0 if rep.biconditional_ok else 1.0, 0.0,
         detail=f"A={rep.verdict_first.is_bse} B={rep.verdict_second.is_bse} "
                f"AxB={rep.verdict_product.is_bse}")
    _rec(records, f"{fix.name}/lau-transport", "lau-bse",
         max(rep.transport_membership, rep.transport_hat_residual,
             0.0 if rep.transport_dim_ok else 1.0),
         cfg.tol_algebraic)

    # direct-sum cross-checks on the same parents
    sum_rep = verify_product_bse(iso.direct, cfg.tol_algebraic, cfg.tol_opt, cfg.seed)
    _rec(records, f"{fix.name}/sum-bse-biconditional", "tim2",
         0.0 if sum_rep.biconditional_ok else 1.0, 0.0)
    _rec(records, f"{fix.name}/sum-multiplier-split", "tim2",
         max(sum_rep.sum_block_residual,
             0.0 if sum_rep.sum_block_dim_ok else 1.0),
         cfg.tol_algebraic)

    _duality_checks(records, fix, lc.set, cfg, rng)
    _bse_verdict_check(records, fix, lc.set, cfg)


def _plain_checks(records, fix: Fixture, cfg: RunConfig, rng: np.random.Generator):
    S = characters_numerical(fix.algebra, cfg.tol_algebraic, cfg.seed)
    worst = float(np.max([ch.residual for ch in S], initial=0.0))
    _rec(records, f"{fix.name}/characters-residual", "plumbing", worst,
         cfg.tol_algebraic, detail=f"{len(S)} characters")
    if fix.family == "group":
        # phase-twisting the basis rescales every character entrywise the same way
        closed = group_character_values(fix.meta["orders"]) * fix.meta["twist"]
        alg = fix.algebra
        expected = CharacterSet(
            alg, [Character(alg, row) for row in closed], provenance="closed_form"
        )
        _, dist = match_character_sets(S, expected, threshold=1e-6)
        _rec(records, f"{fix.name}/characters-oracle", "plumbing", dist, 1e-10)
    _duality_checks(records, fix, S, cfg, rng)
    _bse_verdict_check(records, fix, S, cfg)


def fixture_records(cfg: RunConfig, family: str, index: int) -> list[Record]:
    """All checks for one generated fixture."""
    fix = build_fixture(family, cfg.seed, index, cfg.max_dim)
    rng = fixture_rng(cfg.seed + 1_000_003, family, index)
    records: list[Record] = []
    rep = validate(fix.algebra, cfg.tol_algebraic)
    _rec(records, f"{fix.name}/validate", "plumbing",
         max(rep.max_associativity_residual, rep.max_commutativity_residual,
             rep.max_submultiplicativity_excess, rep.unit_residual or 0.0),
         cfg.tol_algebraic)
    try:
        if family == "semidirect":
            _semidirect_checks(records, fix, cfg, rng)
        elif family == "lau":
            _lau_checks(records, fix, cfg, rng)
        else:
            _plain_checks(records, fix, cfg, rng)
    except BanalgError as exc:
        records.append(Record(f"{fix.name}/error", "plumbing", 1.0, "FAIL",
                              f"{type(exc).__name__}: {exc}"))
    return records


def _worker(args) -> list[Record]:
    cfg_dict, family, index = args
    cfg = RunConfig(**cfg_dict)
    return fixture_records(cfg, family, index)


def run_verify(cfg: RunConfig) -> Report:
    """Generate fixtures per family, run every check, and assemble the report."""
    units = [(family, index) for family in cfg.families for index in range(cfg.count)]
    records: list[Record] = []
    if cfg.jobs > 1:
        cfg_dict = {**cfg.to_dict(), "jobs": 1}
        cfg_dict["families"] = tuple(cfg_dict["families"])
        with concurrent.futures.ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            for recs in pool.map(_worker, [(cfg_dict, f, i) for f, i in units]):
                records.extend(recs)
    else:
        for family, index in units:
            records.extend(fixture_records(cfg, family, index))
    records.sort(key=lambda r: r.name)
    return Report(config=cfg, records=records)


def theorem_records(desc, theorem: str, cfg: RunConfig) -> list[Record]:
    """Run one named check family against a single product bundle."""
    if theorem not in THEOREMS:
        raise ValueError(f"unknown theorem {theorem!r}; choose from {THEOREMS}")
    fix = Fixture(desc.kind, f"{desc.kind}/bundle", desc.algebra, desc,
                  meta={"surjective": True})
    rng = fixture_rng(cfg.seed + 1_000_003, "diag", 0)
    records: list[Record] = []
    if theorem == "lemma21":
        _block_checks(records, fix, cfg)
    elif theorem == "prop24":
        if desc.kind == "semidirect":
            sdc = characters_semidirect(desc, cfg.tol_algebraic, seed=cfg.seed)
            _rec(records, f"{fix.name}/characters-union", "prop24",
                 sdc.cross_check_distance, 1e-8)
        else:
            lc = characters_lau(desc, cfg.tol_algebraic, seed=cfg.seed)
            _rec(records, f"{fix.name}/characters-union", "prop24",
                 lc.cross_check_distance, 1e-8)
    elif theorem in ("lemma41", "theta"):
        lc = characters_lau(desc, cfg.tol_algebraic, seed=cfg.seed)
        if any(g is None for g in lc.gamma):
            _skip(records, f"{fix.name}/{theorem}", theorem, "phi is not surjective")
        else:
            worst = 0.0
            for _ in range(cfg.sigma_samples):
                tau = _random_sigma(rng, len(lc.a_chars))
                rho = _random_sigma(rng, len(lc.b_chars))
                th = theta(tau, rho, lc)
                worst = max(worst, th.isometry_defect)
                if theorem == "lemma41":
                    sp = split_sigma(_random_sigma(rng, len(lc.set)), lc)
                    worst = max(worst, sp.norm_slack)
            _rec(records, f"{fix.name}/{theorem}", theorem, worst, cfg.tol_opt)
    elif theorem == "tim2":
        target = desc
        if desc.kind != "direct_sum":
            target = direct_sum(desc.first, desc.second, cfg.tol_algebraic)
        rep = verify_product_bse(target, cfg.tol_algebraic, cfg.tol_opt, cfg.seed)
        ok = rep.biconditional_ok and rep.sum_block_dim_ok
        res = rep.sum_block_residual if rep.sum_block_residual is not None else 0.0
        _rec(records, f"{fix.name}/tim2", "tim2", res + (0.0 if ok else 1.0),
             cfg.tol_algebraic)
    elif theorem == "lau-bse":
        rep = verify_product_bse(desc, cfg.tol_algebraic, cfg.tol_opt, cfg.seed)
        res = max(rep.transport_membership or 0.0, rep.transport_hat_residual or 0.0,
                  0.0 if rep.biconditional_ok else 1.0)
        _rec(records, f"{fix.name}/lau-bse", "lau-bse", res, cfg.tol_algebraic)
    elif theorem == "sub":
        sdc = characters_semidirect(desc, cfg.tol_algebraic, seed=cfg.seed)
        try:
            ext = sigma_extension(_random_sigma(rng, len(sdc.subalgebra_chars)), sdc)
            _rec(records, f"{fix.name}/sub", "sub",
                 max(ext.norm_slack, ext.witness_error), cfg.tol_opt)
        except SpanConditionError as exc:
            _skip(records, f"{fix.name}/sub", "sub", str(exc))
    records.sort(key=lambda r: r.name)
    return records
