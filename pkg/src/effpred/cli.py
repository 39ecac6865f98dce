"""Command-line front end: analyze / synth / correlate / report."""
from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path
from typing import Optional

from .dataio import (
    ConfigError,
    CsvFormatError,
    RunConfig,
    expand_inputs,
    export_csv,
    ingest_csv,
    parse_config,
    returns_to_prices,
    with_overrides,
)
from .dfa import DfaConfig
from .figures import render_scatter
from .nn import EmbeddingConfig
from .rolling import (
    CrossSectionReport,
    IndexAnalysisError,
    IndexSummary,
    cross_section,
)
from .rolling import run_index as _run_index
from .series import InsufficientHistoryError, build_window_schedule, log_returns
from .synth import fgn_ensemble, random_walk_ensemble

EXIT_OK = 0
EXIT_PARTIAL = 1
EXIT_CONFIG = 2


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(float(value))
    return str(value)


def _load_return_series(cfg: RunConfig, config_dir: Path):
    """Yield (index_id, region, return series or None, error code or None)."""
    if cfg.synth_kind:
        if cfg.synth_kind == "random-walk":
            ensemble = random_walk_ensemble(
                cfg.synth_count, cfg.synth_length_days, cfg.seed,
                cfg.synth_mean, cfg.synth_std,
            )
        else:
            ensemble = fgn_ensemble(
                cfg.synth_count, cfg.synth_length_days, cfg.seed,
                cfg.synth_hurst_min, cfg.synth_hurst_max,
                cfg.synth_mean, cfg.synth_std,
            )
        for rs in ensemble:
            yield rs.index_id, cfg.regions.get(rs.index_id, "other"), rs, None
        return
    for path in expand_inputs(cfg, config_dir):
        index_id = path.stem
        region = cfg.regions.get(index_id, "other")
        try:
            returns = log_returns(ingest_csv(path))
        except (CsvFormatError, ValueError) as e:
            print(f"effpred: {e}", file=sys.stderr)
            yield index_id, region, None, "ingest-error"
            continue
        yield index_id, region, returns, None


def _write_windows_csv(path: Path, summaries) -> None:
    lines = [
        "index_id,window_index,hurst,r_squared,hit_rate,trading_days,"
        "scored_days,confirm_fallbacks,dropped_scales,error"
    ]
    for s in summaries:
        if not isinstance(s, IndexSummary):
            continue
        for w in s.windows:
            lines.append(
                ",".join(
                    [
                        s.index_id,
                        str(w.window_index),
                        _fmt(w.hurst),
                        _fmt(w.r_squared),
                        _fmt(w.hit),
                        str(w.trading_days),
                        str(w.scored_days),
                        str(w.confirm_fallbacks),
                        str(w.dropped_scales),
                        (w.error or "").replace(",", ";"),
                    ]
                )
            )
    path.write_text("\n".join(lines) + "\n")


def _write_summary_csv(path: Path, rows) -> None:
    """rows: (index_id, mean_hurst, mean_hit, n_windows, region, error_code)."""
    lines = ["index_id,H_mean,hit_mean,n_windows,region,error"]
    for index_id, h, q, n, region, err in rows:
        lines.append(
            ",".join([index_id, _fmt(h), _fmt(q), str(n), region, err or ""])
        )
    path.write_text("\n".join(lines) + "\n")


def _write_scatter_csv(path: Path, rows) -> None:
    lines = ["index_id,H_mean,hit_mean,n_windows,region"]
    for index_id, h, q, n, region, err in rows:
        if err or h is None or q is None:
            continue
        lines.append(",".join([index_id, _fmt(h), _fmt(q), str(n), region]))
    path.write_text("\n".join(lines) + "\n")


def _report_payload(report: CrossSectionReport) -> dict:
    return {
        "pearson": report.pearson,
        "spearman": report.spearman,
        "n_indexes": report.n_indexes,
        "hurst_median": report.hurst_median,
        "hit_median": report.hit_median,
        "quadrants": dict(sorted(report.quadrant_labels.items())),
    }


def _write_report_json(path: Path, payload: dict) -> None:
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")


def cmd_analyze(args) -> int:
    cfg = with_overrides(parse_config(args.config), args.out, args.seed)
    out_dir = Path(cfg.output_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    month_rule = cfg.resolved_month_rule()
    embedding = EmbeddingConfig(
        cfg.embedding_dim, cfg.time_delay, cfg.neighbor_count, cfg.keep_fraction
    )
    dfa_config = DfaConfig(cfg.min_scale, cfg.max_scale, cfg.scale_count)

    summaries = []
    summary_rows = []
    partial = False
    for index_id, region, returns, err in _load_return_series(
        cfg, Path(args.config).resolve().parent
    ):
        if err is not None:
            summary_rows.append((index_id, None, None, 0, region, err))
            partial = True
            continue
        try:
            schedule = build_window_schedule(
                returns, cfg.estimation_months, cfg.prediction_months,
                cfg.roll_months, month_rule,
            )
            summary = _run_index(returns, schedule, embedding, dfa_config, region)
        except InsufficientHistoryError as e:
            print(f"effpred: {index_id}: {e}", file=sys.stderr)
            summary_rows.append((index_id, None, None, 0, region, "insufficient-history"))
            partial = True
            continue
        except (IndexAnalysisError, ValueError) as e:
            print(f"effpred: {index_id}: {e}", file=sys.stderr)
            summary_rows.append((index_id, None, None, 0, region, "analysis-failed"))
            partial = True
            continue
        summaries.append(summary)
        summary_rows.append(
            (index_id, summary.mean_hurst, summary.mean_hit,
             summary.window_count, region, None)
        )

    _write_windows_csv(out_dir / "windows.csv", summaries)
    _write_summary_csv(out_dir / "summary.csv", summary_rows)
    _write_scatter_csv(out_dir / "scatter.csv", summary_rows)

    usable = [
        s for s in summaries if s.mean_hurst is not None and s.mean_hit is not None
    ]
    if len(usable) >= 3:
        report = cross_section(usable)
        payload = _report_payload(report)
        scatter_rows = [
            (s.index_id, s.mean_hurst, s.mean_hit, s.region_tag or "other")
            for s in usable
        ]
        render_scatter(
            scatter_rows, out_dir / "scatter.png",
            report.hurst_median, report.hit_median, report.pearson,
        )
    else:
        payload = {"error": f"need at least 3 analyzed indexes, have {len(usable)}"}
        partial = True
    _write_report_json(out_dir / "correlation.json", payload)

    pearson = payload.get("pearson")
    print(
        f"analyzed {len(usable)}/{len(summary_rows)} indexes; "
        f"pearson={_fmt(pearson) or 'n/a'}; artifacts in {out_dir}"
    )
    return EXIT_PARTIAL if partial else EXIT_OK


def cmd_synth(args) -> int:
    cfg = with_overrides(parse_config(args.config), args.out, args.seed)
    if not cfg.synth_kind:
        raise ConfigError(f"{args.config}: synth requires a synth_* spec")
    out_dir = Path(cfg.output_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    if cfg.synth_kind == "random-walk":
        ensemble = random_walk_ensemble(
            cfg.synth_count, cfg.synth_length_days, cfg.seed,
            cfg.synth_mean, cfg.synth_std,
        )
    else:
        ensemble = fgn_ensemble(
            cfg.synth_count, cfg.synth_length_days, cfg.seed,
            cfg.synth_hurst_min, cfg.synth_hurst_max,
            cfg.synth_mean, cfg.synth_std,
        )
    for rs in ensemble:
        export_csv(out_dir / f"{rs.index_id}.csv", returns_to_prices(rs))
    print(f"wrote {len(ensemble)} series to {out_dir}")
    return EXIT_OK


def _read_summary_csv(path: Path):
    rows = list(csv.DictReader(path.read_text().splitlines()))
    if not rows:
        raise CsvFormatError(f"{path}: empty summary file")
    summaries = []
    for row in rows:
        h = row.get("H_mean") or None
        q = row.get("hit_mean") or None
        if h is None or q is None:
            continue
        summaries.append(
            IndexSummary(
                row["index_id"], float(h), float(q),
                int(row.get("n_windows") or 0), row.get("region") or "other",
            )
        )
    return summaries


def cmd_correlate(args) -> int:
    summaries = _read_summary_csv(Path(args.summary))
    report = cross_section(summaries)
    payload = _report_payload(report)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    _write_report_json(out_dir / "correlation.json", payload)
    print(f"pearson={_fmt(report.pearson) or 'n/a'} over {report.n_indexes} indexes")
    return EXIT_OK


def cmd_report(args) -> int:
    payload = json.loads(Path(args.report).read_text())
    if "error" in payload:
        print(f"report unavailable: {payload['error']}")
        return EXIT_PARTIAL
    print(f"indexes:        {payload['n_indexes']}")
    print(f"pearson:        {_fmt(payload['pearson']) or 'n/a'}")
    print(f"spearman:       {_fmt(payload['spearman']) or 'n/a'}")
    print(f"hurst median:   {_fmt(payload['hurst_median'])}")
    print(f"hit median:     {_fmt(payload['hit_median'])}")
    print("quadrants:")
    for index_id, label in payload["quadrants"].items():
        print(f"  {index_id:<24s} {label}")
    if args.summary:
        summaries = _read_summary_csv(Path(args.summary))
        figure = Path(args.figure) if args.figure else Path(args.report).with_name("scatter.png")
        rows = [
            (s.index_id, s.mean_hurst, s.mean_hit, s.region_tag or "other")
            for s in summaries
        ]
        render_scatter(
            rows, figure, payload["hurst_median"], payload["hit_median"],
            payload["pearson"],
        )
        print(f"figure: {figure}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="effpred",
        description=(
            "Rolling-window market efficiency (DFA Hurst exponent) vs. "
            "nearest-neighbor directional predictability."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="run the full pipeline over an index set")
    p.add_argument("--config", required=True, help="flat key=value run configuration")
    p.add_argument("--out", default=None, help="output directory (overrides config)")
    p.add_argument("--seed", type=int, default=None, help="seed override")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("synth", help="generate synthetic index CSVs")
    p.add_argument("--config", required=True)
    p.add_argument("--out", default=None)
    p.add_argument("--seed", type=int, default=None)
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("correlate", help="re-run the cross-section from a summary CSV")
    p.add_argument("--summary", required=True, help="summary.csv from a prior run")
    p.add_argument("--out", default=".", help="directory for correlation.json")
    p.set_defaults(func=cmd_correlate)

    p = sub.add_parser("report", help="pretty-print a correlation report")
    p.add_argument("--report", required=True, help="correlation.json path")
    p.add_argument("--summary", default=None, help="summary.csv to render a scatter figure")
    p.add_argument("--figure", default=None, help="scatter figure output path")
    p.set_defaults(func=cmd_report)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, CsvFormatError, FileNotFoundError, ValueError) as e:
        print(f"effpred: error: {e}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
