"""Command line: gen, search, verify, number, selftest.

Exit codes: 0 found / verified / exact value, 1 not found / rejected /
lower bound only, 2 invalid input, 3 budget exhausted or indeterminate.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import acceptance
from .consistency import ConsistencyParams, find_consistent_array, find_consistent_box
from .errors import BudgetExhausted, InvalidInput
from .generators import (gen_constant_colouring, gen_direction_colouring, gen_lex_array,
                         gen_random_array, gen_random_colouring)
from .io import (dumps, instance_digest, number_result_to_dict, read_certificate, read_instance,
                 verify_certificate, write_atomic, write_certificate, write_instance)
from .model import BoxColouring
from .oracle import NumberQuery, compute_number, decide_L_instance, decide_M_instance, decide_R_instance
from .pipelines import PipelineParams, find_mono_box, find_mono_box_2d, find_monotone_subarray
from .report import SearchLog

FOUND, NOT_FOUND, INVALID, BUDGET = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(INVALID)


def _diag(msg: str) -> None:
    print(msg, file=sys.stderr)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="boxramsey", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    g = sub.add_parser("gen", help="write a generated instance file")
    g.add_argument("kind", choices=["colouring", "array"])
    g.add_argument("--d", type=int, required=True)
    g.add_argument("--side", type=int, required=True)
    g.add_argument("--colours", type=int, default=2)
    g.add_argument("--generator", default="random",
                   help="colouring: random|direction|constant; array: random|lex")
    g.add_argument("--seed", type=int, help="required by the random generators")
    g.add_argument("--out", required=True)

    s = sub.add_parser("search", help="search an instance for a target structure")
    s.add_argument("target", choices=["mono-box", "monotone", "lex-monotone", "consistent"])
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--strategy", choices=["pipeline", "pipeline2d", "exact"], default="exact")
    s.add_argument("--seed", type=int, help="required by the pipeline strategies")
    s.add_argument("--budget", type=int, default=None, help="node budget")
    s.add_argument("--in", dest="inp", required=True)
    s.add_argument("--cert-out")
    s.add_argument("--trace-out")

    v = sub.add_parser("verify", help="check a certificate against an instance")
    v.add_argument("--in", dest="inp", required=True)
    v.add_argument("--cert", required=True)

    nb = sub.add_parser("number", help="compute R_r(d,n), M_d(n) or L_d(n) exactly")
    nb.add_argument("family", choices=["R", "M", "L"])
    nb.add_argument("--d", type=int, required=True)
    nb.add_argument("--n", type=int, required=True)
    nb.add_argument("--colours", type=int, default=2)
    nb.add_argument("--max-side", type=int, required=True)
    nb.add_argument("--budget", type=int, default=10_000_000)
    nb.add_argument("--instance-limit", type=int, default=1_000_000)
    nb.add_argument("--method", choices=["auto", "order_types", "patterns"], default="auto")
    nb.add_argument("--witness-out")
    nb.add_argument("--json-out")

    st = sub.add_parser("selftest", help="run the desk-scale acceptance suite")
    st.add_argument("--only", type=int, nargs="*", help="criterion numbers to run")
    return p


def _gen(a) -> int:
    if a.kind == "colouring":
        if a.generator == "random":
            if a.seed is None:
                raise InvalidInput("--seed is required for random instances")
            obj = gen_random_colouring(a.d, a.side, a.colours, a.seed)
        elif a.generator == "direction":
            obj = gen_direction_colouring(a.d, a.side, a.colours)
        elif a.generator == "constant":
            obj = gen_constant_colouring(a.d, a.side, a.colours)
        else:
            raise InvalidInput(f"unknown colouring generator {a.generator!r}")
    else:
        if a.d < 1 or a.side < 1:
            raise InvalidInput("d and side must be positive")
        if a.generator == "random":
            if a.seed is None:
                raise InvalidInput("--seed is required for random instances")
            obj = gen_random_array([a.side] * a.d, a.seed)
        elif a.generator == "lex":
            obj = gen_lex_array([a.side] * a.d)
        else:
            raise InvalidInput(f"unknown array generator {a.generator!r}")
    prov = {"generator": a.generator, "seed": a.seed}
    write_instance(a.out, obj, prov)
    print(a.out)
    return FOUND


def _search(a) -> int:
    obj, _ = read_instance(a.inp)
    if a.n < 1:
        raise InvalidInput("--n must be positive")
    if a.strategy != "exact" and a.seed is None:
        raise InvalidInput("--seed is required by the pipeline strategies")
    log = SearchLog()
    params = PipelineParams(seed=a.seed or 0,
                            consistency=ConsistencyParams(budget=a.budget or 1_000_000))
    colouring = isinstance(obj, BoxColouring)
    if a.target == "mono-box":
        if not colouring:
            raise InvalidInput("mono-box needs a colouring instance")
        if a.strategy == "exact":
            cert = decide_R_instance(obj, a.n, a.budget)
        elif a.strategy == "pipeline":
            cert = find_mono_box(obj, a.n, params, log)
        else:
            cert = find_mono_box_2d(obj, a.n, params, log)
    elif a.target in ("monotone", "lex-monotone"):
        if colouring:
            raise InvalidInput(f"{a.target} needs an array instance")
        if a.target == "lex-monotone":
            if a.strategy != "exact":
                raise InvalidInput("lex-monotone only has the exact strategy")
            cert = decide_L_instance(obj, a.n, a.budget)
        elif a.strategy == "exact":
            cert = decide_M_instance(obj, a.n, a.budget)
        elif a.strategy == "pipeline":
            cert = find_monotone_subarray(obj, a.n, params, log)
        else:
            raise InvalidInput("pipeline2d is only defined for colourings")
    else:
        if a.strategy != "pipeline" and a.strategy != "exact":
            raise InvalidInput("consistent search has no 2-d strategy")
        finder = find_consistent_box if colouring else find_consistent_array
        cert = finder(obj, a.n, params.consistency, log)
    if a.trace_out:
        write_atomic(a.trace_out, dumps(log.to_dict()))
    for rec in log.records:
        if rec.guarantee_void:
            _diag(f"guarantee-void: stage {rec.stage}")
    if cert is None:
        fail = log.failure
        _diag(f"not found: stage {fail.stage}: {fail.detail.get('reason', '')}" if fail else "not found")
        return NOT_FOUND
    if a.cert_out:
        write_certificate(a.cert_out, cert, obj)
    print(json.dumps({"found": True, "subbox": [list(c) for c in cert.subbox]}))
    return FOUND


def _verify(a) -> int:
    obj, _ = read_instance(a.inp)
    cert, digest = read_certificate(a.cert)
    if digest != instance_digest(obj):
        _diag("certificate refers to a different instance")
        return NOT_FOUND
    ok = verify_certificate(obj, cert, digest)
    print("valid" if ok else "invalid")
    return FOUND if ok else NOT_FOUND


def _number(a) -> int:
    q = NumberQuery(a.family, a.d, a.n, r=a.colours, side_cap=a.max_side, node_budget=a.budget,
                    instance_limit=a.instance_limit, method=a.method)
    res = compute_number(q)
    path = None
    if res.witness is not None and a.witness_out:
        write_instance(a.witness_out, res.witness, {"generator": f"number {a.family} witness", "seed": None})
        path = a.witness_out
    if a.json_out:
        write_atomic(a.json_out, dumps(number_result_to_dict(q, res, path)))
    if res.status == "value":
        print(res.value)
        if path:
            _diag(f"witness at side {res.witness_side}: {path}")
        return FOUND
    if res.status == "lower_bound":
        print(f"> {res.lower_bound - 1}" + (f" (witness: {path})" if path else ""))
        return NOT_FOUND
    _diag(f"indeterminate: {res.reason}")
    if res.lower_bound is not None:
        _diag(f"proven: > {res.lower_bound - 1}" + (f" (witness: {path})" if path else ""))
    return BUDGET


def _selftest(a) -> int:
    outcomes = acceptance.run(a.only)
    return FOUND if all(o.ok for o in outcomes) else NOT_FOUND


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return INVALID if exc.code is None else int(exc.code)
    handler = {"gen": _gen, "search": _search, "verify": _verify, "number": _number,
               "selftest": _selftest}[args.command]
    try:
        return handler(args)
    except BudgetExhausted as exc:
        _diag(f"budget exhausted: {exc}")
        return BUDGET
    except InvalidInput as exc:
        _diag(f"invalid input: {exc}")
        return INVALID


if __name__ == "__main__":
    sys.exit(main())
