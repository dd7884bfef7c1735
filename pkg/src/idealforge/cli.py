"""Command-line front end: build configurations, run the check suites, report.

Every subcommand prints one report to standard output (or ``--out``), JSON by
default, a flat ``path = value`` listing with ``--format text``.  Progress
chatter from the long passes goes to standard error only, so the report
stream stays clean.  Exit codes: 0 all executed checks passed, 2 a check
failed, 3 a resource guard or budget stopped the run, 64 usage errors.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np

from .configs import (
    DEFAULT_SEED,
    ConstructionError,
    SphericalConfiguration,
    build_4cube,
    build_e6,
    build_e7,
    build_e8,
    build_golay,
    build_icosahedron,
    build_knn,
    build_leech,
    build_ngon,
    read_points,
    write_points,
)
from .gamma import EntryGuardError, gamma2_status, gamma_profile
from .generators import (
    GeneratorSet,
    build_generator_set,
    e7_section,
    restrict_to_section,
    write_generators,
)
from .groebner import (
    BudgetExceededError,
    DEFAULT_BUDGET,
    certify_full,
)
from .lattice import basis_from_generators, enumerate_short_vectors, unimodularity_check
from .verify import (
    CRITICAL_DEGREE,
    DESIGN_STRENGTH,
    FAIL,
    FULL,
    PASS,
    SAMPLED,
    SKIPPED,
    assemble_certificate,
    check_gallery_vanishing,
    check_vanishing,
    design_strength_gegenbauer,
    jacobian_full_pass,
    nontrivial_generator_check,
    section_embedding_check,
    spanning_check,
)

EXIT_OK = 0
EXIT_CHECK = 2
EXIT_RESOURCE = 3
EXIT_USAGE = 64

CONFIG_NAMES = ("icosahedron", "e6", "e7", "e8", "leech", "cube4", "ngon", "knn")
THEOREM_CONFIGS = ("icosahedron", "e6", "e7", "e8", "leech")
LATTICE_CONFIGS = ("e8", "leech")
# configurations whose candidate generators submit to desk-scale certification
CERTIFIABLE = ("icosahedron", "e6", "e7", "cube4", "ngon", "knn")

Progress = Callable[[str], None]


class _Parser(argparse.ArgumentParser):
    """argparse with the usage-error exit code pinned."""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _default_n(name: str, n: Optional[int]) -> Optional[int]:
    if name == "ngon":
        return 6 if n is None else n
    if name == "knn":
        return 3 if n is None else n
    return None


def _config_key(name: str, n: Optional[int]) -> str:
    n = _default_n(name, n)
    return f"{name}{n}" if n is not None else name


def _build_config(name: str, n: Optional[int]) -> SphericalConfiguration:
    n = _default_n(name, n)
    if name == "ngon":
        return build_ngon(n)
    if name == "knn":
        return build_knn(n)
    if name == "cube4":
        return build_4cube()[0]
    return {
        "icosahedron": build_icosahedron,
        "e6": build_e6,
        "e7": build_e7,
        "e8": build_e8,
        "leech": build_leech,
    }[name]()


def _generators(name: str, n: Optional[int]) -> GeneratorSet:
    return build_generator_set(name, _default_n(name, n))


def _certification_instance(name: str, n: Optional[int]):
    """Configuration and generators in the coordinates the engine can finish."""
    cfg = _build_config(name, n)
    gens = _generators(name, n)
    if name == "e7":
        gens = restrict_to_section(gens, e7_section())
    return cfg, gens


def _report_skeleton(key: str, mode: str) -> Dict[str, object]:
    return {
        "config": key,
        "mode": mode,
        "claims": [],
        "gamma": {},
        "design": {},
        "counts": {},
        "timings": {},
    }


def _text_lines(obj, prefix: str = "") -> List[str]:
    if isinstance(obj, dict):
        out: List[str] = []
        for k, v in obj.items():
            out.extend(_text_lines(v, f"{prefix}.{k}" if prefix else str(k)))
        return out
    if isinstance(obj, (list, tuple)):
        out = []
        for i, v in enumerate(obj):
            out.extend(_text_lines(v, f"{prefix}.{i}"))
        return out
    return [f"{prefix} = {obj}"]


def _emit(report: Dict[str, object], fmt: str, out: Optional[str]) -> None:
    if fmt == "json":
        text = json.dumps(report, indent=2) + "\n"
    else:
        text = "\n".join(_text_lines(report)) + "\n"
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _stderr_progress(msg: str) -> None:
    print(msg, file=sys.stderr, flush=True)


# ---------------------------------------------------------------------------
# subcommand bodies
# ---------------------------------------------------------------------------


def _cmd_build(args) -> int:
    key = _config_key(args.config, args.n)
    report = _report_skeleton(key, FULL)
    t0 = time.time()
    cfg = _build_config(args.config, args.n)
    counts: Dict[str, object] = {"points": cfg.npoints, "dimension": cfg.m}
    if args.config == "leech":
        code = build_golay()
        counts["golay_codewords"] = len(code.codewords)
        counts["weight8_words"] = code.weight_distribution.get(8, 0)
        counts["type_split"] = list(cfg.type_counts)
    if args.config == "cube4":
        counts["gallery_points"] = len(build_4cube()[1])
    report["counts"] = counts
    report["timings"]["build"] = round(time.time() - t0, 3)
    if args.points_out:
        write_points(cfg, args.points_out)
        report["counts"]["points_file"] = args.points_out
    if args.generators_out:
        write_generators(_generators(args.config, args.n), args.generators_out)
        report["counts"]["generators_file"] = args.generators_out
    _emit(report, args.format, args.out)
    return EXIT_OK


def _verify_bundle(
    args, report: Dict[str, object], mode: str, progress: Optional[Progress]
) -> bool:
    """Run the check suite for one configuration into the report; True iff green."""
    name = args.config
    cfg = _build_config(name, args.n)
    G = _generators(name, args.n)
    timings = report["timings"]
    override_points = None
    if getattr(args, "points", None):
        try:
            override_points = read_points(args.points).points
        except (OSError, ValueError) as exc:
            report["claims"] = [
                {"id": f"{name}.points_file", "status": FAIL, "mode": mode, "detail": str(exc)}
            ]
            return False

    t0 = time.time()
    if override_points is not None:
        vanish = check_vanishing(G, points=override_points)
    else:
        vanish = check_vanishing(G, mode=mode, seed=args.seed, progress=progress)
    timings["vanishing"] = round(time.time() - t0, 3)

    if name in THEOREM_CONFIGS:
        components = {"vanishing": vanish, "support.spanning": spanning_check(cfg)}
        if cfg.section is not None:
            components["support.section"] = section_embedding_check(cfg)
        t0 = time.time()
        components["jacobian"] = jacobian_full_pass(G, progress=progress)
        timings["jacobian"] = round(time.time() - t0, 3)
        components["nontrivial"] = nontrivial_generator_check(G, CRITICAL_DEGREE[name])
        t0 = time.time()
        design = design_strength_gegenbauer(
            cfg, DESIGN_STRENGTH[name], mode=mode, seed=args.seed, threads=args.threads
        )
        timings["design"] = round(time.time() - t0, 3)
        certified = False
        if name in CERTIFIABLE:
            cert_cfg, gens = _certification_instance(name, args.n)
            t0 = time.time()
            certified = certify_full(cert_cfg, gens, budget=args.budget).certified
            timings["groebner"] = round(time.time() - t0, 3)
        assembled = assemble_certificate(
            name, components, design=design, groebner_certified=certified
        )
        report["claims"] = [rec.to_dict() for rec in assembled.records]
        report["design"] = design.to_dict()
        ok = assembled.passed
    else:
        claims = [vanish]
        if name != "knn":
            # knn points live inside two hyperplanes, so full-rank spanning
            # is the wrong question there
            claims.append(spanning_check(cfg))
        if name == "cube4":
            claims.append(check_gallery_vanishing(G, build_4cube()[1]))
        else:
            t0 = time.time()
            claims.append(jacobian_full_pass(G, progress=progress))
            timings["jacobian"] = round(time.time() - t0, 3)
        report["claims"] = [rec.to_dict() for rec in claims]
        ok = all(rec.passed or rec.status == SKIPPED for rec in claims)
    report["counts"] = {"points": cfg.npoints, "generators": len(G)}
    return ok


def _cmd_verify(args) -> int:
    name = args.config
    mode = args.mode or (SAMPLED if name == "leech" else FULL)
    key = _config_key(name, args.n)
    report = _report_skeleton(key, mode)
    progress = _stderr_progress if name == "leech" and mode == FULL else None
    ok = _verify_bundle(args, report, mode, progress)
    _emit(report, args.format, args.out)
    return EXIT_OK if ok else EXIT_CHECK


def _gamma_section(args) -> Tuple[Dict[str, object], str]:
    name = args.config
    key = _config_key(name, args.n)
    cfg = _build_config(name, args.n)
    exhibited = CRITICAL_DEGREE.get(name)
    g2 = None
    if name in CERTIFIABLE:
        cert_cfg, gens = _certification_instance(name, args.n)
        cert = certify_full(cert_cfg, gens, budget=args.budget)
        if cert.certified:
            # the inputs provably generate the ideal, so their top degree
            # bounds the generation threshold; the reduced staircase may climb
            degree = max(p.degree() for _, p in gens)
            g2 = gamma2_status(cfg, degree, certified=True)
    elif name in THEOREM_CONFIGS:
        g2 = gamma2_status(cfg, CRITICAL_DEGREE[name], certified=False)
    profile = gamma_profile(cfg, exhibited_degree=exhibited, gamma2=g2, name=key)
    return {key: profile.to_dict()}, key


def _cmd_gamma(args) -> int:
    section, key = _gamma_section(args)
    report = _report_skeleton(key, FULL)
    t0 = time.time()
    report["gamma"] = section
    report["timings"]["gamma"] = round(time.time() - t0, 3)
    _emit(report, args.format, args.out)
    return EXIT_OK


def _cmd_groebner(args) -> int:
    name = args.config
    if name == "leech":
        print("idealforge groebner: leech is out of reach for the engine", file=sys.stderr)
        return EXIT_USAGE
    key = _config_key(name, args.n)
    report = _report_skeleton(key, FULL)
    cfg, gens = _certification_instance(name, args.n)
    t0 = time.time()
    cert = certify_full(cfg, gens, budget=args.budget)
    report["timings"]["groebner"] = round(time.time() - t0, 3)
    report["claims"] = [
        {
            "id": f"{key}.groebner",
            "status": PASS if cert.certified else FAIL,
            "mode": FULL,
            "detail": f"level {cert.level}: {cert.detail}",
        }
    ]
    counts: Dict[str, object] = {"points": cfg.npoints, "generators": len(gens)}
    counts["quotient_dimension"] = cert.quotient_dimension
    if cert.quotient is not None:
        counts["hilbert"] = cert.quotient.hilbert_coefficients()
    if cert.basis is not None:
        counts["basis_size"] = len(cert.basis)
    if args.basis_out and cert.basis is not None:
        with open(args.basis_out, "w") as fh:
            for line in cert.basis.to_text():
                fh.write(line + "\n")
        counts["basis_file"] = args.basis_out
    report["counts"] = counts
    _emit(report, args.format, args.out)
    return EXIT_OK if cert.certified else EXIT_CHECK


def _cmd_enumerate(args) -> int:
    name = args.config
    if name not in LATTICE_CONFIGS:
        print(
            f"idealforge enumerate: {name} has no integral lattice to enumerate",
            file=sys.stderr,
        )
        return EXIT_USAGE
    report = _report_skeleton(name, FULL)
    cfg = _build_config(name, None)
    t0 = time.time()
    basis = basis_from_generators(cfg)
    uni = unimodularity_check(basis)
    report["timings"]["basis"] = round(time.time() - t0, 3)
    t0 = time.time()
    result = enumerate_short_vectors(basis, cfg.r2, threads=args.threads)
    report["timings"]["enumeration"] = round(time.time() - t0, 3)
    arr, _den = cfg.integer_array()
    found = np.array(result.vectors, dtype=np.int64)
    set_equal = found.shape == arr.shape and bool(
        np.array_equal(np.unique(found, axis=0), np.unique(arr, axis=0))
    )
    report["counts"] = {
        "enumerated": result.count,
        "expected": cfg.npoints,
        "set_equal": set_equal,
        "det_gram": uni.det_gram,
        "det_expected": uni.expected,
        "unimodular": uni.unimodular,
    }
    ok = result.count == cfg.npoints and set_equal and uni.unimodular
    return _finish(report, args, ok)


def _finish(report: Dict[str, object], args, ok: bool) -> int:
    _emit(report, args.format, args.out)
    return EXIT_OK if ok else EXIT_CHECK


def _cmd_report(args) -> int:
    name = args.config
    mode = args.mode or (SAMPLED if name == "leech" else FULL)
    key = _config_key(name, args.n)
    report = _report_skeleton(key, mode)
    progress = _stderr_progress if name == "leech" and mode == FULL else None
    ok = _verify_bundle(args, report, mode, progress)
    t0 = time.time()
    section, _ = _gamma_section(args)
    report["gamma"] = section
    report["timings"]["gamma"] = round(time.time() - t0, 3)
    if name in LATTICE_CONFIGS:
        basis = basis_from_generators(_build_config(name, None))
        uni = unimodularity_check(basis)
        report["counts"]["det_gram"] = uni.det_gram
        report["counts"]["det_expected"] = uni.expected
        report["counts"]["unimodular"] = uni.unimodular
        ok = ok and uni.unimodular
    return _finish(report, args, ok)


# ---------------------------------------------------------------------------
# argument wiring
# ---------------------------------------------------------------------------


def _add_common(sub: argparse.ArgumentParser, with_mode: bool = True) -> None:
    sub.add_argument("config", choices=CONFIG_NAMES, help="configuration name")
    sub.add_argument("--n", type=int, help="family member for ngon/knn")
    sub.add_argument(
        "--seed",
        type=lambda s: int(s, 0),
        default=DEFAULT_SEED,
        help="sampling seed (default 0xC0DE)",
    )
    sub.add_argument("--threads", type=int, default=1, help="worker processes")
    sub.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="reduction budget")
    sub.add_argument("--out", help="write the report here instead of stdout")
    sub.add_argument("--format", choices=("json", "text"), default="json")
    if with_mode:
        grp = sub.add_mutually_exclusive_group()
        grp.add_argument(
            "--full", dest="mode", action="store_const", const=FULL, help="check every point"
        )
        grp.add_argument(
            "--sampled",
            dest="mode",
            action="store_const",
            const=SAMPLED,
            help="check a seeded sample",
        )
        sub.set_defaults(mode=None)


def build_parser() -> _Parser:
    parser = _Parser(prog="idealforge", description=__doc__.splitlines()[0])
    subs = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p_build = subs.add_parser("build", help="construct a configuration and count it")
    _add_common(p_build, with_mode=False)
    p_build.add_argument("--points-out", help="write the point set to this file")
    p_build.add_argument("--generators-out", help="write the generator set to this file")
    p_build.set_defaults(func=_cmd_build)

    p_verify = subs.add_parser("verify", help="run the certificate check suite")
    _add_common(p_verify)
    p_verify.add_argument("--points", help="verify generators against this point file")
    p_verify.set_defaults(func=_cmd_verify)

    p_gamma = subs.add_parser("gamma", help="degree-threshold profile")
    _add_common(p_gamma, with_mode=False)
    p_gamma.set_defaults(func=_cmd_gamma)

    p_groebner = subs.add_parser("groebner", help="basis and certification")
    _add_common(p_groebner, with_mode=False)
    p_groebner.add_argument("--basis-out", help="write the reduced basis to this file")
    p_groebner.set_defaults(func=_cmd_groebner)

    p_enum = subs.add_parser("enumerate", help="short-vector enumeration cross-check")
    _add_common(p_enum, with_mode=False)
    p_enum.set_defaults(func=_cmd_enumerate)

    p_report = subs.add_parser("report", help="verify plus thresholds in one report")
    _add_common(p_report)
    p_report.set_defaults(func=_cmd_report)

    return parser


def run(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.threads < 1:
        print("idealforge: error: --threads must be at least 1", file=sys.stderr)
        return EXIT_USAGE
    if getattr(args, "n", None) is not None and args.config not in ("ngon", "knn"):
        print("idealforge: error: --n only selects ngon/knn members", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except (BudgetExceededError, EntryGuardError) as exc:
        print(f"idealforge: resource: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except (ConstructionError, OSError, ValueError) as exc:
        print(f"idealforge: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
