"""Command-line front end.

Subcommands: check-box (validate a box file and report its signaling
channels), curve (strength values over a delta grid, CSV), verify (named
verification suites), dump-polytope (H/V representations for external
cross-checking).  Exit codes: 0 ok, 1 verification failure, 2 bad input,
3 numeric non-convergence.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, replace

import numpy as np

from . import boxes, channels, geometry, monogamy, strength


@dataclass(frozen=True)
class RunConfig:
    prob_tol: float = 1e-12
    cap_tol: float = 1e-6
    solver_tol: float = 1e-4
    step: float = 0.1
    seed: int = 0
    out: "str | None" = None

    def __post_init__(self):
        if min(self.prob_tol, self.cap_tol, self.solver_tol) <= 0:
            raise ValueError("tolerances must be positive")
        if not 0 < self.step <= 0.1:
            raise ValueError("step must lie in (0, 0.1]")


def _load_config_file(path) -> dict:
    """Simple key=value file; unknown keys rejected."""
    allowed = set(RunConfig.__dataclass_fields__)
    out = {}
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected key=value")
            key, val = (part.strip() for part in line.split("=", 1))
            if key not in allowed:
                raise ValueError(f"{path}:{lineno}: unknown key {key!r}")
            out[key] = val
    return out


def _config_from_args(args) -> RunConfig:
    cfg = RunConfig()
    if getattr(args, "config", None):
        raw = _load_config_file(args.config)
        casts = {"seed": int, "out": str}
        kwargs = {k: casts.get(k, float)(v) for k, v in raw.items()}
        cfg = replace(cfg, **kwargs)
    overrides = {}
    for key in ("seed", "out"):
        val = getattr(args, key, None)
        if val is not None:
            overrides[key] = val
    if getattr(args, "tol", None) is not None:
        overrides["solver_tol"] = args.tol
    return replace(cfg, **overrides)


# ---------------------------------------------------------------------------
# check-box

def cmd_check_box(args) -> int:
    cfg = _config_from_args(args)
    try:
        box = boxes.load_box(args.path)
    except boxes.BoxError as err:
        print(f"error: {args.path}: {err}", file=sys.stderr)
        return 2
    ns = boxes.check_no_signaling(box)
    try:
        mono = monogamy.monogamy_lhs(box, relaxed=args.relaxed)
    except monogamy.StrictModeInapplicable as err:
        print(f"error: strict monogamy undefined for this box ({err}); "
              "rerun with --relaxed", file=sys.stderr)
        return 2
    fam = channels.channels_from_box(box, relaxed=args.relaxed)
    caps = fam.capacities()

    print(f"box: m={box.m}, valid")
    sig = "nonsignaling" if ns.is_nonsignaling else "SIGNALING"
    print(f"no-signaling: {sig} (worst marginal discrepancy {ns.worst_violation:.3e})")
    for label, worst in ns.offenders:
        print(f"  {label}: {worst:.3e}")
    print(f"monogamy: lhs={mono.lhs:.6f} bound={mono.bound:g} delta={mono.delta:.6f} "
          f"violated={mono.violated}")
    print("channels:")
    for label, ch in fam.channels:
        print(f"  {label}: p={ch.p:.6f} q={ch.q:.6f} capacity={caps[label]:.6f}")
    print(f"max capacity: {max(caps.values()):.6f}")

    report = {
        "m": box.m,
        "is_nonsignaling": ns.is_nonsignaling,
        "worst_marginal_discrepancy": ns.worst_violation,
        "monogamy": {"lhs": mono.lhs, "bound": mono.bound,
                     "delta": mono.delta, "violated": mono.violated},
        "channels": [{"label": label, "p": ch.p, "q": ch.q,
                      "capacity": caps[label]}
                     for label, ch in fam.channels],
    }
    if cfg.out:
        with open(cfg.out, "w") as fh:
            json.dump(report, fh, indent=2, sort_keys=True)
            fh.write("\n")
    return 0


# ---------------------------------------------------------------------------
# curve

def cmd_curve(args) -> int:
    # the delta grid spacing may exceed the RunConfig default range (a coarse
    # 0.5 grid is a legitimate request), so it is validated separately
    step = args.step
    if step is None:
        step = _config_from_args(args).step
    elif not 0 < step <= 2.0:
        print(f"error: curve step must lie in (0, 2], got {step}", file=sys.stderr)
        return 2
    cfg = _config_from_args(args)
    m = args.m
    deltas = [round(k * step, 10) for k in range(int(round(2.0 / step)) + 1)]
    result = strength.curve(m, deltas, tol=cfg.solver_tol)
    text = result.to_csv()
    if not result.ok:
        failed = [r.delta for r in result.rows if r.error is not None]
        text += f"# non-convergence at delta={failed}\n"
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if not result.ok:
        return 3
    return 0


# ---------------------------------------------------------------------------
# verify

def _check(name, computed, expected, tol) -> bool:
    ok = abs(computed - expected) <= tol
    status = "PASS" if ok else "FAIL"
    print(f"  [{status}] {name}: expected {expected} +- {tol:g}, computed {computed:.6f}")
    return ok


def verify_appendix_b() -> int:
    rep = strength.c2_analytic()
    ok = True
    ok &= _check("alpha*", rep.alpha_star, 0.469, 0.002)
    ok &= _check("C_2", rep.c2, 0.158, 0.002)
    ok &= _check("subregion optimum", rep.subregion_value, 0.322, 0.001)
    return 0 if ok else 1


def verify_appendix_a() -> int:
    rep = geometry.verify_characterization()
    print(f"  vertices: {rep.vertex_count} "
          f"(delta=0: {rep.slice_counts['0']}, delta=2: {rep.slice_counts['2']}, "
          f"interior: {rep.slice_counts['interior']})")
    print(f"  [{'PASS' if rep.q_vertices_in_slices else 'FAIL'}] "
          "all vertices lie in the delta=0 or delta=2 slice")
    print(f"  [{'PASS' if rep.all_preimages_found else 'FAIL'}] "
          "every vertex admits an exact box preimage")
    return 0 if (rep.q_vertices_in_slices and rep.all_preimages_found) else 1


def verify_minimal_set() -> int:
    ok = True
    for m in (2, 3):
        count = monogamy.verify_minimal_set(m)
        good = count == 1
        ok &= good
        print(f"  [{'PASS' if good else 'FAIL'}] m={m}: {count} multiset(s) of size {2*m}")
        short = monogamy.verify_minimal_set(m, 2 * m - 1)
        good = short == 0
        ok &= good
        print(f"  [{'PASS' if good else 'FAIL'}] m={m}: {short} multiset(s) of size {2*m-1}")
    return 0 if ok else 1


def verify_properties(seed: int = 0) -> int:
    rng = np.random.default_rng(seed)
    ok = True

    worst = 0.0
    worst_marginal = 0.0
    for k in range(10_000):
        box = boxes.random_nonsignaling(2, rng.integers(0, 2**63))
        worst = max(worst, monogamy.monogamy_lhs(box).lhs)
        worst_marginal = max(worst_marginal,
                             boxes.check_no_signaling(box, 1e-12).worst_violation)
    good = worst <= 4.0 + 1e-9 and worst_marginal <= 1e-12
    ok &= good
    print(f"  [{'PASS' if good else 'FAIL'}] 1e4 nonsignaling boxes: "
          f"max monogamy lhs {worst:.9f} <= 4 + 1e-9, "
          f"max marginal spread {worst_marginal:.1e} <= 1e-12")

    bad = 0
    for k in range(10_000):
        dist = rng.dirichlet(np.ones(8)).reshape(2, 2, 2)
        for signs in monogamy.SIGN_PATTERNS:
            if not monogamy.triple_inequality_holds(dist, signs):
                bad += 1
    good = bad == 0
    ok &= good
    print(f"  [{'PASS' if good else 'FAIL'}] 1e4 random distributions x 4 sign "
          f"patterns: {bad} violations")

    worst_gap = 0.0
    sym_ok = True
    for k in range(1_000):
        p, q = rng.uniform(0, 1, 2)
        ch = channels.BinaryChannel(p, q)
        c = channels.capacity(ch)
        worst_gap = max(worst_gap, abs(c - channels.capacity_oracle(ch)))
        sym_ok &= abs(c - channels.capacity(channels.BinaryChannel(q, p))) < 1e-12
        sym_ok &= abs(c - channels.capacity(channels.BinaryChannel(1-p, 1-q))) < 1e-12
    good = worst_gap <= 1e-6 and sym_ok
    ok &= good
    print(f"  [{'PASS' if good else 'FAIL'}] 1e3 channels: |closed form - iterative| "
          f"max {worst_gap:.2e} <= 1e-6, symmetries hold: {sym_ok}")

    conv_bad = 0
    for k in range(1_000):
        p1, p2, q = rng.uniform(0, 1, 3)
        mid = channels._capacity_pq(0.5 * (p1 + p2), q)
        avg = 0.5 * (channels._capacity_pq(p1, q) + channels._capacity_pq(p2, q))
        if mid > avg + 1e-12:
            conv_bad += 1
        mid = channels._capacity_pq(q, 0.5 * (p1 + p2))
        avg = 0.5 * (channels._capacity_pq(q, p1) + channels._capacity_pq(q, p2))
        if mid > avg + 1e-12:
            conv_bad += 1
    good = conv_bad == 0
    ok &= good
    print(f"  [{'PASS' if good else 'FAIL'}] 1e3 triples: midpoint convexity "
          f"violations {conv_bad}")
    return 0 if ok else 1


def cmd_verify(args) -> int:
    cfg = _config_from_args(args)
    print(f"verify {args.target}:")
    if args.target == "appendix-b":
        return verify_appendix_b()
    if args.target == "appendix-a":
        return verify_appendix_a()
    if args.target == "minimal-set":
        return verify_minimal_set()
    if args.target == "properties":
        return verify_properties(cfg.seed)
    raise AssertionError(args.target)


# ---------------------------------------------------------------------------
# dump-polytope

def cmd_dump_polytope(args) -> int:
    cfg = _config_from_args(args)
    try:
        poly = geometry.build_q_delta(args.m, args.delta, relaxed=args.relaxed)
    except ValueError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    text = geometry.dump_h_representation(poly)
    if args.vertices:
        text += geometry.dump_v_representation(geometry.enumerate_vertices(poly))
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="signalcap",
        description="Quantify the classical information extractable from "
                    "tripartite boxes that violate no-signaling monogamy bounds.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check-box", help="validate a box JSON file and report "
                       "its no-signaling status, monogamy value and channels")
    p.add_argument("path")
    p.add_argument("--relaxed", action="store_true")
    p.add_argument("--out", help="also write the report as JSON")
    p.add_argument("--config")
    p.set_defaults(func=cmd_check_box)

    p = sub.add_parser("curve", help="strength curve over a delta grid (CSV)")
    p.add_argument("--m", type=int, default=2)
    p.add_argument("--step", type=float, default=None)
    p.add_argument("--tol", type=float, default=None)
    p.add_argument("--out")
    p.add_argument("--config")
    p.set_defaults(func=cmd_curve)

    p = sub.add_parser("verify", help="run a named verification suite")
    p.add_argument("target", choices=["appendix-a", "appendix-b",
                                      "minimal-set", "properties"])
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--config")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("dump-polytope", help="H- (and optionally V-) "
                       "representation of a violation polytope")
    p.add_argument("--m", type=int, default=2)
    p.add_argument("--delta", type=float, required=True)
    p.add_argument("--relaxed", action="store_true")
    p.add_argument("--vertices", action="store_true")
    p.add_argument("--out")
    p.add_argument("--config")
    p.set_defaults(func=cmd_dump_polytope)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except channels.NoConvergence as err:
        print(f"error: {err}", file=sys.stderr)
        return 3
    except (ValueError, OSError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 2


def entry_point():
    sys.exit(main())


if __name__ == "__main__":
    entry_point()
