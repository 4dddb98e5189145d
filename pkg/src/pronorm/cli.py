"""Command line entry point: ``verify run|all|list``.

Exit codes: 0 all pass, 1 any fail, 2 cap truncation without failure,
3 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import scenarios as S

EXIT_USAGE = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _add_caps(p: argparse.ArgumentParser) -> None:
    p.add_argument("--cap-elements", type=int, metavar="N", help="element enumeration cap")
    p.add_argument("--cap-order", type=int, metavar="N", help="largest group order a scenario may build")
    p.add_argument("--cap-subgroups", type=int, metavar="N", help="subgroup search cap")
    p.add_argument("--config", metavar="FILE", help="JSON file of per-scenario caps")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="verify", description="Run pronormality verification scenarios.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    run = sub.add_parser("run", help="run one scenario")
    run.add_argument("id")
    run.add_argument("--json", metavar="OUT", help="write the report to this file")
    _add_caps(run)

    every = sub.add_parser("all", help="run every (filtered) scenario")
    every.add_argument("--filter", metavar="GLOB", help="fnmatch pattern on scenario ids")
    every.add_argument("--jobs", type=int, default=1, metavar="N")
    every.add_argument("--json", metavar="OUT", help="write reports and summary to this file")
    _add_caps(every)

    sub.add_parser("list", help="list registered scenarios")
    return parser


def _overrides(args) -> dict:
    return {"elements": args.cap_elements, "order": args.cap_order, "subgroups": args.cap_subgroups}


def _line(report: dict) -> str:
    return f"{report['status'].upper():11s} {report['id']:36s} {report['wall_ms'] / 1000:8.2f}s"


def _write(path: str, text: str) -> None:
    with open(path, "w") as fh:
        fh.write(text + "\n")


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    if args.command == "list":
        for s in S.list_scenarios():
            tag = " [exploratory]" if s["exploratory"] else ""
            print(f"{s['id']:36s} {s['claim']}{tag}")
        return 0

    try:
        config = S.load_config(args.config)
    except (OSError, ValueError) as exc:
        print(f"verify: bad config: {exc}", file=sys.stderr)
        return EXIT_USAGE

    if args.command == "run":
        try:
            report = S.run_scenario(args.id, _overrides(args), config)
        except S.UnknownScenario:
            print(f"verify: unknown scenario {args.id!r}; see 'verify list'", file=sys.stderr)
            return EXIT_USAGE
        text = report.to_json()
        if args.json:
            _write(args.json, text)
            print(_line(report.to_dict()))
        else:
            print(text)
        return S.exit_code([report.to_dict()])

    if args.jobs < 1:
        print("verify: --jobs must be at least 1", file=sys.stderr)
        return EXIT_USAGE
    if not S.select(args.filter):
        print(f"verify: no scenario matches {args.filter!r}", file=sys.stderr)
        return EXIT_USAGE
    reports, summary = S.run_all(args.filter, args.jobs, _overrides(args), config)
    for r in reports:
        print(_line(r))
    print(" ".join(f"{k}={summary[k]}" for k in ("pass", "fail", "truncated", "unreachable", "total")))
    if args.json:
        _write(args.json, json.dumps({"reports": reports, "summary": summary}, sort_keys=True, indent=2))
    return S.exit_code(reports)


if __name__ == "__main__":
    sys.exit(main())
