"""Command-line front end.

Subcommands: gen, keygen, solve, verify, oracle, reduce, stats.

Exit codes form a stable machine contract:

* ``solve``: 0 Isomorphic, 1 NotIsomorphic, 2 GenericityFailed,
  3 BudgetExceeded
* ``verify`` / ``oracle``: 0 holds, 1 does not
* errors: 10 malformed file, 11 field/shape mismatch between inputs,
  12 budget violation, 13 other invalid argument — each with a one-line
  ``error: <code>: <message>`` on stderr.

Randomness always comes from ``--seed`` or the FORMISO_SEED environment
variable (default 0); there is no ambient entropy.
"""

from __future__ import annotations

import argparse
import os
import sys
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from . import adjiso, forms, linalg, reduction, serialize, solver, stats, tensor3
from .gfq import field_from_order
from .linalg import MatrixTuple
from .serialize import Instance, MalformedFile

EXIT_OK = 0
EXIT_NO = 1
EXIT_VERDICT = {
    solver.ISOMORPHIC: 0,
    solver.NOT_ISOMORPHIC: 1,
    solver.GENERICITY_FAILED: 2,
    solver.BUDGET_EXCEEDED: 3,
}
EXIT_MALFORMED = 10
EXIT_MISMATCH = 11
EXIT_BUDGET = 12
EXIT_INVALID = 13


class CliError(Exception):
    def __init__(self, code: int, tag: str, message: str):
        super().__init__(message)
        self.code = code
        self.tag = tag


def _fail(code: int, tag: str, message: str) -> CliError:
    return CliError(code, tag, message)


def _seed(args) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get("FORMISO_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise _fail(EXIT_INVALID, "bad-seed", f"FORMISO_SEED={env!r} is not an integer")
    return 0


def _write(text: str, path: str | None) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _load(path: str) -> Instance:
    return serialize.load(path)


def _check_same_field(a: Instance, b: Instance) -> None:
    if a.ctx.q != b.ctx.q:
        raise _fail(
            EXIT_MISMATCH, "field-mismatch", f"inputs over F_{a.ctx.q} and F_{b.ctx.q}"
        )
    if a.kind != b.kind:
        raise _fail(EXIT_MISMATCH, "kind-mismatch", f"{a.kind} vs {b.kind}")
    if a.n != b.n:
        raise _fail(EXIT_MISMATCH, "size-mismatch", f"n={a.n} vs n={b.n}")


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def cmd_gen(args) -> int:
    ctx = field_from_order(args.q)
    rng = linalg.rng_for(_seed(args))
    if args.kind == "poly":
        obj = forms.random_poly(ctx, args.n, args.d, rng, homogeneous=not args.inhomogeneous)
        inst = Instance("poly", ctx, obj)
    elif args.kind in ("trilinear", "algebra"):
        t = tensor3.random_tensor(ctx, (args.n, args.n, args.n), rng)
        inst = Instance(args.kind, ctx, t)
    elif args.kind == "tuple":
        mats = tuple(linalg.random_alternating(ctx, args.n, rng) for _ in range(args.m))
        inst = Instance("tuple", ctx, MatrixTuple("general", np.stack(mats)))
    else:
        raise _fail(EXIT_INVALID, "bad-kind", f"cannot generate kind {args.kind!r}")
    _write(serialize.serialize(inst), args.output)
    return EXIT_OK


def cmd_keygen(args) -> int:
    ctx = field_from_order(args.q)
    rng = linalg.rng_for(_seed(args))
    f = forms.random_poly(ctx, args.n, args.d, rng, homogeneous=True)
    a = linalg.random_invertible(ctx, args.n, rng)
    g = forms.poly_act(ctx, f, a)
    prefix = args.out_prefix
    serialize.dump(Instance("poly", ctx, f), prefix + ".f")
    serialize.dump(Instance("poly", ctx, g), prefix + ".g")
    serialize.dump(Instance("matrix", ctx, a), prefix + ".key")
    print(f"wrote {prefix}.f {prefix}.g {prefix}.key")
    return EXIT_OK


def _dispatch_solve(inst1: Instance, inst2: Instance, cfg: solver.SolveConfig):
    ctx = inst1.ctx
    if inst1.kind == "poly":
        f, g = inst1.payload, inst2.payload
        if f.degree() != g.degree():
            return solver.SolveReport(verdict=solver.NOT_ISOMORPHIC)
        d = f.degree()
        if f.homogeneous and g.homogeneous and d >= 3:
            return solver.solve_degree_d(ctx, f, g, d, cfg)
        return solver.solve_inhomogeneous(ctx, f, g, max(d, 1), cfg)
    if inst1.kind in ("trilinear", "tensor"):
        return solver.solve_trilinear(ctx, inst1.payload, inst2.payload, cfg)
    if inst1.kind == "algebra":
        return solver.solve_algebra(ctx, inst1.payload, inst2.payload, cfg)
    raise _fail(EXIT_INVALID, "bad-kind", f"cannot solve kind {inst1.kind!r}")


def _solve_worker(path1: str, path2: str, cfg_kw: dict):
    inst1, inst2 = serialize.load(path1), serialize.load(path2)
    report = _dispatch_solve(inst1, inst2, solver.SolveConfig(**cfg_kw))
    return report.verdict, report.witness


def _branch_total(n: int, r: int, q: int) -> int:
    """Number of T1 branches: independent r-tuples times complement
    parameterizations (must match the solver's enumeration order)."""
    total = 1
    for i in range(r):
        total *= q ** n - q ** i
    return total * q ** (r * (n - r))


def cmd_solve(args) -> int:
    inst1, inst2 = _load(args.input1), _load(args.input2)
    _check_same_field(inst1, inst2)
    cfg_kw = dict(
        r=args.r if args.r > 0 else None,
        budget=args.budget,
        t1_limit=args.t1_limit,
        seed=_seed(args),
        use_fastpath=not args.no_fastpath,
    )
    if args.jobs <= 1:
        report = _dispatch_solve(inst1, inst2, solver.SolveConfig(**cfg_kw))
        verdict, witness = report.verdict, report.witness
    else:
        kind = "cubic-char2" if inst1.ctx.char == 2 else "cubic-odd"
        if inst1.kind in ("trilinear", "tensor", "algebra"):
            kind = "trilinear" if inst1.kind != "algebra" else "algebra"
        r_eff = solver.SolveConfig(**cfg_kw).effective_r(inst1.n, kind)
        total = _branch_total(inst1.n, r_eff, inst1.ctx.q)
        step = -(-total // args.jobs)
        ranges = [(lo, min(lo + step, total)) for lo in range(0, total, step)]
        verdict, witness = solver.NOT_ISOMORPHIC, None
        saw_generic = saw_budget = False
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            futs = [
                pool.submit(_solve_worker, args.input1, args.input2, {**cfg_kw, "t1_range": rg})
                for rg in ranges
            ]
            for fut in futs:
                v, w = fut.result()
                if v == solver.ISOMORPHIC and witness is None:
                    verdict, witness = v, w
                elif v == solver.BUDGET_EXCEEDED:
                    saw_budget = True
                elif v == solver.GENERICITY_FAILED:
                    saw_generic = True
        if verdict != solver.ISOMORPHIC:
            if saw_budget:
                verdict = solver.BUDGET_EXCEEDED
            elif saw_generic:
                verdict = solver.GENERICITY_FAILED
    print(f"verdict: {verdict}")
    if witness is not None:
        text = serialize.serialize(Instance("matrix", inst1.ctx, witness))
        if args.witness_out:
            _write(text, args.witness_out)
        else:
            sys.stdout.write(text)
    return EXIT_VERDICT[verdict]


def _witness_holds(inst1: Instance, inst2: Instance, w: np.ndarray) -> bool:
    ctx = inst1.ctx
    if w.shape != (inst1.n, inst1.n):
        raise _fail(EXIT_MISMATCH, "size-mismatch", "witness size does not match inputs")
    if inst1.kind == "poly":
        return inst1.payload == forms.poly_act(ctx, inst2.payload, w)
    if inst1.kind in ("trilinear", "tensor"):
        return np.array_equal(inst1.payload, forms.trilinear_act(ctx, inst2.payload, w))
    if inst1.kind == "algebra":
        return np.array_equal(inst1.payload, forms.algebra_act(ctx, inst2.payload, w))
    raise _fail(EXIT_INVALID, "bad-kind", f"cannot verify kind {inst1.kind!r}")


def cmd_verify(args) -> int:
    inst1, inst2 = _load(args.input1), _load(args.input2)
    _check_same_field(inst1, inst2)
    wit = _load(args.witness)
    if wit.kind != "matrix":
        raise _fail(EXIT_MALFORMED, "bad-witness", "witness file must have kind 'matrix'")
    if wit.ctx.q != inst1.ctx.q:
        raise _fail(EXIT_MISMATCH, "field-mismatch", "witness field differs from inputs")
    ok = _witness_holds(inst1, inst2, wit.payload)
    print("witness: valid" if ok else "witness: invalid")
    return EXIT_OK if ok else EXIT_NO


ORACLE_RELATION = {
    "poly": "polynomial-isomorphism",
    "trilinear": "trilinear-equivalence",
    "tensor": "trilinear-equivalence",
    "algebra": "algebra-isomorphism",
    "tuple": "pseudo-isometry",
}


def cmd_oracle(args) -> int:
    inst1, inst2 = _load(args.input1), _load(args.input2)
    _check_same_field(inst1, inst2)
    if inst1.n > 4 or (inst1.ctx.q ** (inst1.n * inst1.n)) > 2 ** 26:
        raise _fail(EXIT_BUDGET, "budget-exceeded", "oracle restricted to tiny sizes")
    res = adjiso.brute_iso(
        inst1.ctx, inst1.payload, inst2.payload, ORACLE_RELATION[inst1.kind]
    )
    print(f"oracle: {res.verdict}")
    return EXIT_OK if res.equivalent else EXIT_NO


def _as_alternating(inst: Instance) -> MatrixTuple:
    if inst.kind != "tuple":
        raise _fail(EXIT_INVALID, "bad-kind", "reduce needs a tuple instance")
    tup = inst.payload
    try:
        alt = MatrixTuple("alternating", tup.mats)
        alt.validate_alternating(inst.ctx)
    except ValueError as exc:
        raise _fail(EXIT_INVALID, "not-alternating", str(exc))
    return alt


def cmd_reduce(args) -> int:
    inst = _load(args.input)
    ctx = inst.ctx
    tup = _as_alternating(inst)
    art = reduction.build_hat(ctx, tup)
    _write(serialize.serialize(Instance("tensor", ctx, art.hat)), args.output)
    if args.witness:
        p_inst, q_inst = _load(args.witness[0]), _load(args.witness[1])
        if p_inst.kind != "matrix" or q_inst.kind != "matrix":
            raise _fail(EXIT_MALFORMED, "bad-witness", "witness files must be matrices")
        p, d = p_inst.payload, q_inst.payload
        n, m = tup.size, tup.m
        if p.shape != (n, n) or d.shape != (m, m):
            raise _fail(EXIT_MISMATCH, "size-mismatch", "witness sizes do not match tuple")
        s = reduction.witness_from_pseudo_isometry(ctx, p, d, n, m)
        other = reduction.apply_pseudo_isometry(ctx, tup, p, d)
        hat_b = reduction.build_hat(ctx, other).hat
        ok = reduction.verify_equivalence(ctx, hat_b, art.hat, s)
        text = serialize.serialize(Instance("matrix", ctx, s))
        if args.witness_out:
            _write(text, args.witness_out)
        else:
            sys.stdout.write(text)
        print(f"equivalence-witness: {'valid' if ok else 'invalid'}")
        if not ok:
            return EXIT_NO
    return EXIT_OK


def cmd_stats(args) -> int:
    if args.experiment == "adj-dim":
        rep = stats.adj_dim_experiment(
            args.ell, args.r, args.q, args.samples, seed=_seed(args), kind=args.tuple_kind
        )
    elif args.experiment == "rank-bound":
        rep = stats.rank_bound_experiment(
            args.ell, args.d, args.q, args.samples, seed=_seed(args)
        )
    elif args.experiment == "merge":
        try:
            rep = stats.merge_uniformity(args.d, args.q, mode=args.mode, samples=args.samples, seed=_seed(args))
        except ValueError as exc:
            raise _fail(EXIT_BUDGET, "budget-exceeded", str(exc))
    else:  # stability
        inst = _load(args.input)
        if inst.kind != "tuple":
            raise _fail(EXIT_INVALID, "bad-kind", "stability needs a tuple instance")
        try:
            stable = stats.stability_check(inst.ctx, inst.payload)
        except ValueError as exc:
            raise _fail(EXIT_BUDGET, "budget-exceeded", str(exc))
        print(f"stable={str(stable).lower()}")
        return EXIT_OK
    for line in rep.lines():
        print(line)
    return EXIT_OK


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="formiso",
        description="Average-case isomorphism testing for forms, tensors, and algebras over small finite fields.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    def add_seed(p):
        p.add_argument("--seed", type=int, default=None, help="RNG seed (default: FORMISO_SEED or 0)")

    p = sub.add_parser("gen", help="generate a random instance")
    p.add_argument("--kind", required=True, choices=["poly", "trilinear", "algebra", "tuple"])
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d", type=int, default=3, help="polynomial degree")
    p.add_argument("--m", type=int, default=2, help="tuple length")
    p.add_argument("--inhomogeneous", action="store_true")
    add_seed(p)
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("keygen", help="generate a Patarin-style keypair (f, g = f∘A; secret A)")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d", type=int, default=3)
    add_seed(p)
    p.add_argument("-o", "--out-prefix", required=True)
    p.set_defaults(func=cmd_keygen)

    p = sub.add_parser("solve", help="decide isomorphism and emit a witness")
    p.add_argument("input1")
    p.add_argument("input2")
    p.add_argument(
        "--r", type=int, default=2,
        help="slice count; 2 is the desk-scale default (0 = theory defaults)",
    )
    p.add_argument("--budget", type=int, default=adjiso.DEFAULT_BUDGET)
    p.add_argument("--t1-limit", type=int, default=None)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--no-fastpath", action="store_true")
    add_seed(p)
    p.add_argument("--witness-out", default=None)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("verify", help="re-check a witness; exit 0 iff valid")
    p.add_argument("input1")
    p.add_argument("input2")
    p.add_argument("witness")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("oracle", help="brute-force ground truth (tiny sizes)")
    p.add_argument("input1")
    p.add_argument("input2")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("reduce", help="gadget reduction: alternating tuple -> trilinear form")
    p.add_argument("input")
    p.add_argument("-o", "--output", default=None)
    p.add_argument("--witness", nargs=2, metavar=("P", "Q"), default=None,
                   help="pseudo-isometry witness matrices; also emits and checks S")
    p.add_argument("--witness-out", default=None)
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("stats", help="validation experiments")
    ssub = p.add_subparsers(dest="experiment", required=True)

    sp = ssub.add_parser("adj-dim")
    sp.add_argument("--ell", type=int, required=True)
    sp.add_argument("--r", type=int, required=True)
    sp.add_argument("--q", type=int, required=True)
    sp.add_argument("--samples", type=int, default=200)
    sp.add_argument("--tuple-kind", default="symmetric",
                    choices=["symmetric", "alternating", "general"])
    add_seed(sp)
    sp.set_defaults(func=cmd_stats)

    sp = ssub.add_parser("stability")
    sp.add_argument("input")
    sp.set_defaults(func=cmd_stats)

    sp = ssub.add_parser("rank-bound")
    sp.add_argument("--ell", type=int, required=True)
    sp.add_argument("--d", type=int, required=True)
    sp.add_argument("--q", type=int, required=True)
    sp.add_argument("--samples", type=int, default=1000)
    add_seed(sp)
    sp.set_defaults(func=cmd_stats)

    sp = ssub.add_parser("merge")
    sp.add_argument("--d", type=int, required=True)
    sp.add_argument("--q", type=int, required=True)
    sp.add_argument("--mode", default="exhaustive", choices=["exhaustive", "sampled"])
    sp.add_argument("--samples", type=int, default=10000)
    add_seed(sp)
    sp.set_defaults(func=cmd_stats)

    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc.tag}: {exc}", file=sys.stderr)
        return exc.code
    except MalformedFile as exc:
        print(f"error: malformed-file: {exc}", file=sys.stderr)
        return EXIT_MALFORMED
    except ValueError as exc:
        print(f"error: invalid-argument: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
