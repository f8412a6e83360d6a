"""Command-line interface.

Subcommands: validate, homology, exactseq, morita, kahler, fixtures.
Reports go to stdout (deterministic bytes for identical inputs); a
machine-readable JSON copy can be written with --output.  Exit codes:
0 success, 1 mathematical verification failure, 2 input error,
3 resource guard exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .algebra import matrix_triple, validate_bimodule, validate_triple
from .complexes import (
    DEFAULT_GUARD_BYTES,
    build_classical_complex,
    build_secondary_complex,
    homology,
)
from .errors import (
    BudgetExceededError,
    HochschildError,
    InstanceFormatError,
    PreconditionError,
    ScalarError,
    SizeGuardError,
)
from .fields import field_from_name
from .fixtures import NAMED_FIXTURES
from .kahler import verify_fundamental_sequence, verify_h1_kahler
from .morita import corner_morita, standard_matrix_morita, verify_morita_invariance
from .report import Report
from .sequences import TripleMorphism, validate_triple_morphism, verify_exact_sequence
from .serialize import Instance, parse_instance, serialize_instance

EXIT_OK = 0
EXIT_MATH_FAIL = 1
EXIT_INPUT = 2
EXIT_GUARD = 3


def _read_instance(args):
    try:
        text = Path(args.path).read_text()
    except OSError as exc:
        raise InstanceFormatError(f"cannot read {args.path}: {exc}") from None
    override = field_from_name(args.field) if getattr(args, "field", None) else None
    return parse_instance(text, field_override=override)


def _emit(report, args):
    sys.stdout.write(report.render())
    output = getattr(args, "output", None)
    if output:
        Path(output).write_text(
            json.dumps(report.as_dict(), indent=2, sort_keys=True) + "\n"
        )
    return EXIT_OK if report.ok else EXIT_MATH_FAIL


def cmd_validate(args):
    inst = _read_instance(args)
    report = Report("instance validation")
    report.extend(validate_triple(inst.triple))
    report.extend(validate_bimodule(inst.module, inst.triple))
    if inst.morphism is not None:
        from .algebra import AlgebraMorphism

        tm = TripleMorphism(
            inst.triple,
            inst.triple,
            AlgebraMorphism(inst.triple.A, inst.triple.A, inst.morphism[0]),
            AlgebraMorphism(inst.triple.B, inst.triple.B, inst.morphism[1]),
        )
        report.extend(validate_triple_morphism(tm))
    return _emit(report, args)


def _format_chain(scheme, labels_m, labels_a, labels_b, vec, field):
    terms = []
    for idx in sorted(vec):
        mu, alphas, betas = scheme.decode(idx)
        parts = [labels_m[mu]]
        if alphas:
            parts.append(",".join(labels_a[a] for a in alphas))
        if betas:
            parts.append(",".join(labels_b[b] for b in betas))
        terms.append(f"{field.format(vec[idx])}*({' ; '.join(parts)})")
    return " + ".join(terms) if terms else "0"


def cmd_homology(args):
    inst = _read_instance(args)
    t, m = inst.triple, inst.module
    if args.kind == "classical":
        cx = build_classical_complex(
            t.A, m, args.max_degree, guard_bytes=args.guard_bytes
        )
    else:
        cx = build_secondary_complex(
            t, m, args.max_degree, guard_bytes=args.guard_bytes
        )
    report = Report(f"homology ({args.kind})")
    report.info("chain dims", str(list(cx.dims)))
    labels_m = [f"m{i}" for i in range(m.dim)]
    for n in range(args.max_degree):
        res = homology(cx, n, with_reps=args.reps)
        report.info(f"H_{n}", f"dim {res.dim}")
        if args.reps:
            for k, rep in enumerate(res.reps):
                report.info(
                    f"H_{n} rep {k}",
                    _format_chain(
                        cx.schemes[n],
                        labels_m,
                        t.A.basis_labels,
                        t.B.basis_labels,
                        rep,
                        inst.field,
                    ),
                )
    return _emit(report, args)


def cmd_exactseq(args):
    inst = _read_instance(args)
    report = verify_exact_sequence(
        inst.triple, inst.module, guard_bytes=args.guard_bytes
    )
    return _emit(report, args)


def cmd_morita(args):
    inst = _read_instance(args)
    spec = inst.morita or {"kind": "matrix", "n": args.n}
    if spec["kind"] == "matrix":
        data = standard_matrix_morita(inst.triple, spec.get("n", args.n))
    else:
        e = {
            i: v
            for i, v in enumerate(
                inst.field.parse(s) for s in spec["idempotent"]
            )
            if v != inst.field.zero
        }
        data = corner_morita(inst.triple, e)
    report = verify_morita_invariance(
        data, inst.module, args.max_degree, guard_bytes=args.guard_bytes
    )
    return _emit(report, args)


def cmd_kahler(args):
    inst = _read_instance(args)
    report = Report("kahler differentials")
    report.extend(verify_h1_kahler(inst.triple, inst.module))
    report.extend(verify_fundamental_sequence(inst.triple))
    return _emit(report, args)


def cmd_fixtures(args):
    outdir = Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    written = []
    for name, fn in NAMED_FIXTURES.items():
        t, m = fn()
        morita = {"kind": "matrix", "n": 2}
        inst = Instance(t.A.field, t, m, morita=morita)
        path = outdir / f"{name}.json"
        path.write_text(serialize_instance(inst))
        written.append(path)
    for name in ("FIX-D", "FIX-DD"):
        t, m = NAMED_FIXTURES[name]()
        lifted, lift = matrix_triple(t, 2)
        inst = Instance(t.A.field, lifted, lift(m))
        path = outdir / f"{name}-M2.json"
        path.write_text(serialize_instance(inst))
        written.append(path)
    for path in written:
        sys.stdout.write(f"wrote {path}\n")
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(
        prog="hochschild",
        description="Exact classical and secondary Hochschild homology.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, with_field=True):
        p.add_argument("path", help="instance file")
        if with_field:
            p.add_argument(
                "--field",
                help="override the scalar field (Q or Fp:<prime>) for cross-checks",
            )
        p.add_argument("--output", help="write a JSON report to this path")
        p.add_argument(
            "--guard-bytes",
            type=int,
            default=DEFAULT_GUARD_BYTES,
            help="memory guard for complex construction",
        )

    p = sub.add_parser("validate", help="run all validity checks on an instance")
    add_common(p)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("homology", help="homology dimensions per degree")
    add_common(p)
    p.add_argument(
        "--kind", choices=("classical", "secondary"), default="secondary"
    )
    p.add_argument("--max-degree", type=int, default=3)
    p.add_argument(
        "--reps", action="store_true", help="print representative cycles"
    )
    p.set_defaults(func=cmd_homology)

    p = sub.add_parser("exactseq", help="verify the five-term exact sequence")
    add_common(p)
    p.set_defaults(func=cmd_exactseq)

    p = sub.add_parser("morita", help="verify Morita invariance for the instance")
    add_common(p)
    p.add_argument(
        "--n", type=int, default=2, help="matrix size when no morita section exists"
    )
    p.add_argument("--max-degree", type=int, default=1)
    p.set_defaults(func=cmd_morita)

    p = sub.add_parser("kahler", help="verify the Kaehler-differential facts")
    add_common(p)
    p.set_defaults(func=cmd_kahler)

    p = sub.add_parser("fixtures", help="emit the built-in instances as files")
    p.add_argument("--outdir", required=True)
    p.set_defaults(func=cmd_fixtures)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (InstanceFormatError, ScalarError, PreconditionError) as exc:
        sys.stderr.write(f"input error: {exc}\n")
        return EXIT_INPUT
    except (SizeGuardError, BudgetExceededError) as exc:
        sys.stderr.write(f"resource guard: {exc}\n")
        return EXIT_GUARD
    except HochschildError as exc:
        sys.stderr.write(f"verification failure: {exc}\n")
        return EXIT_MATH_FAIL


if __name__ == "__main__":
    sys.exit(main())
