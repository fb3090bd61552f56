"""Command line front end.

Subcommands:
    predict   equilibrium, eigenvalue and rotation direction per game
    simulate  seeded multi-group agent simulation of a schedule
    analyze   rotation tables and reports from trajectory files
    stats     the inference battery over an accumulated-rotation table
    phase     replicator velocity fields as CSV (and quiver figures)

Exit codes: 0 on success, 2 on bad input, 1 on internal error.
"""

from __future__ import annotations

import argparse
import csv
import sys
from fractions import Fraction
from pathlib import Path

from . import agents, games, io, replicator, rotation, stats
from .errors import ValidationError


def _parse_game_list(text: str | None) -> list[str] | None:
    if text is None:
        return None
    out = [g.strip() for g in text.split(",") if g.strip()]
    if not out:
        raise ValidationError("--games given but empty")
    return out


def _game_sort_key(gid: str):
    return (0, int(gid)) if gid.isdigit() else (1, gid)


def _print_table(rows: list[list[str]], header: list[str]) -> None:
    widths = [max(len(str(r[i])) for r in [header] + rows) for i in range(len(header))]
    fmt = "  ".join(f"{{:<{w}}}" for w in widths)
    print(fmt.format(*header))
    for r in rows:
        print(fmt.format(*(str(v) for v in r)))


def _fmt_nash(nash) -> str:
    if nash is None:
        return "--"
    return f"({nash[0]}, {nash[1]})"


# -- predict -------------------------------------------------------------


def cmd_predict(args) -> int:
    matrices = io.load_matrices(args.matrices)
    wanted = _parse_game_list(args.games)
    if wanted is not None:
        missing = [g for g in wanted if g not in matrices]
        if missing:
            raise ValidationError(f"games not in {args.matrices}: {missing}")
        matrices = {g: matrices[g] for g in wanted}

    rows = []
    for gid, m in matrices.items():
        pred = games.predict(m)
        g = pred.normalized
        lam = "--" if pred.direction == 0 else f"{pred.eigenvalue:.3f}"
        rows.append(
            [gid, str(g.a), str(g.b), str(g.c), str(g.d), lam,
             _fmt_nash(pred.nash), f"{pred.direction:+d}" if pred.direction else "0"]
        )
    _print_table(rows, ["game", "a", "b", "c", "d", "lambda", "nash", "direction"])

    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        with open(out / "predictions.csv", "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(
                ["game", "a", "b", "c", "d", "lambda", "nash_p", "nash_q", "direction"]
            )
            for gid, m in matrices.items():
                pred = games.predict(m)
                g = pred.normalized
                np_, nq = ("", "") if pred.nash is None else (str(pred.nash[0]), str(pred.nash[1]))
                writer.writerow(
                    [gid, g.a, g.b, g.c, g.d, f"{pred.eigenvalue:.6f}", np_, nq,
                     pred.direction]
                )
        print(f"wrote {out / 'predictions.csv'}")
    return 0


# -- simulate ------------------------------------------------------------


def cmd_simulate(args) -> int:
    schedule = io.load_schedule(args.schedule)
    if args.config:
        config = io.load_config(args.config, seed=args.seed)
    else:
        config = io.config_from_dict({}, seed=args.seed)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    seeds = [config.seed + i for i in range(args.groups)]
    labels = [f"g{i + 1:02d}" for i in range(args.groups)]
    p_counts, q_counts, _, _ = agents.simulate_counts(schedule, config, seeds)

    written = []
    for r, label in enumerate(labels):
        trajs = agents.segment_trajectories(
            schedule, p_counts[r], q_counts[r], config.n_agents, label
        )
        for traj in trajs:
            path = out / f"traj_{label}_game{traj.game_id}.csv"
            io.save_trajectory(traj, path)
            written.append(path)

    manifest = out / "manifest.json"
    io.write_manifest(
        manifest,
        {
            "schedule": str(args.schedule),
            "config": io.config_to_dict(config),
            "groups": args.groups,
            "seeds": seeds,
            "total_rounds": schedule.total_rounds,
        },
        written,
    )
    print(f"wrote {len(written)} trajectory files and {manifest}")
    return 0


# -- analyze -------------------------------------------------------------


def _cycling_games(predictions: dict, table: dict, wanted: list[str] | None) -> list[str]:
    if wanted is not None:
        missing = [g for g in wanted if g not in table]
        if missing:
            raise ValidationError(f"--games not present in the data: {missing}")
        return wanted
    return [g for g in table if g in predictions and predictions[g].direction != 0]


def cmd_analyze(args) -> int:
    trajs = [io.load_trajectory(p) for p in args.trajectories]
    predictions = {}
    if args.matrices:
        predictions = {
            gid: games.predict(m) for gid, m in io.load_matrices(args.matrices).items()
        }

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    report_dir = out / "reports"
    report_dir.mkdir(exist_ok=True)

    reports = []
    for traj in trajs:
        pred = predictions.get(traj.game_id)
        nash = pred.nash if pred is not None else None
        rep = rotation.build_report(traj, nash=nash)
        reports.append(rep)
        name = f"report_{rep.group_id}_game{rep.game_id}.txt"
        with open(report_dir / name, "w") as fh:
            fh.write(io.report_text(rep))
    io.save_reports_csv(reports, out / "reports.csv")

    # accumulated-rotation table, one row per game, one column per group
    groups = sorted({r.group_id for r in reports})
    game_ids = sorted({r.game_id for r in reports}, key=_game_sort_key)
    by_cell = {(r.game_id, r.group_id): r.l_accumulated for r in reports}
    table: dict[str, list[Fraction]] = {}
    for gid in game_ids:
        row = []
        for grp in groups:
            if (gid, grp) not in by_cell:
                raise ValidationError(
                    f"missing trajectory for game {gid}, group {grp}; "
                    "the rotation table must be complete"
                )
            row.append(by_cell[(gid, grp)])
        table[gid] = row
    io.save_l_table(groups, table, out / "l_table.csv")

    print(f"{len(reports)} segments, {len(groups)} groups, {len(game_ids)} games")
    shown = [[gid] + [f"{float(v):+.2f}" for v in row] for gid, row in table.items()]
    _print_table(shown, ["game"] + groups)

    cycling = _cycling_games(predictions, table, _parse_game_list(args.games))
    if cycling:
        phi = rotation.relative_rotation({g: table[g] for g in cycling})
        io.save_l_table(groups, phi, out / "phi_table.csv")
        rrc = rotation.response_coefficients(phi)
        io.save_group_vector(groups, rrc, "rrc", out / "rrc.csv")
        print("\nresponse coefficients (games " + ",".join(cycling) + "):")
        _print_table([[g, f"{float(v):.2f}"] for g, v in zip(groups, rrc)],
                     ["group", "rrc"])
    else:
        print("\nno cycling games identified; phi and response coefficients skipped")

    # per-group cumulative rotation curves, re-zeroed at each game switch
    series_by_group = {}
    boundaries: list[int] = []
    for grp in groups:
        ts, cums, games_col, t0 = [], [], [], 0
        bounds = []
        for traj in trajs:
            if traj.group_id != grp:
                continue
            cum = 0.0
            for t, l in enumerate(rotation.rotation_series(traj)):
                cum += float(l)
                ts.append(t0 + t + 1)
                cums.append(cum)
                games_col.append(traj.game_id)
            t0 += len(traj)
            bounds.append(t0)
        with open(out / f"cumulative_{grp}.csv", "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["t", "game", "l_cum"])
            writer.writerows(zip(ts, games_col, cums))
        series_by_group[grp] = (ts, cums)
        boundaries = bounds
    if not args.no_plot:
        from . import plots

        plots.save_cumulative_rotation(
            series_by_group, boundaries[:-1], out / "cumulative_rotation.png"
        )
        print(f"wrote {out / 'cumulative_rotation.png'}")
    return 0


# -- stats ---------------------------------------------------------------


def cmd_stats(args) -> int:
    groups, table = io.load_l_table(args.ltable)
    predictions = {
        gid: games.predict(m) for gid, m in io.load_matrices(args.matrices).items()
    }
    cycling = _cycling_games(predictions, table, _parse_game_list(args.games))
    if not cycling:
        raise ValidationError("no cycling games to test; give --games or check inputs")

    rows = []  # test, statistic, df, p, note

    # direction consistency, per game and pooled
    total_match = total_n = 0
    for gid in cycling:
        pred_dir = predictions[gid].direction
        vals = table[gid]
        match = sum(1 for v in vals if (v > 0) == (pred_dir > 0) and v != 0)
        total_match += match
        total_n += len(vals)
        rows.append(
            [f"direction sign test (game {gid})", f"{match}/{len(vals)}", len(vals),
             stats.sign_test(match, len(vals)), f"predicted {pred_dir:+d}"]
        )
    rows.append(
        ["direction sign test (all games)", f"{total_match}/{total_n}", total_n,
         stats.sign_test(total_match, total_n), "pooled"]
    )

    # strength separation: high-eigenvalue half vs low half, absolute values
    by_lam = sorted(cycling, key=lambda g: predictions[g].eigenvalue)
    lo_games, hi_games = by_lam[: len(by_lam) // 2], by_lam[len(by_lam) // 2 :]
    if lo_games and hi_games:
        lo = [abs(float(v)) for g in lo_games for v in table[g]]
        hi = [abs(float(v)) for g in hi_games for v in table[g]]
        t_res = stats.two_sample_t(hi, lo)
        rows.append(
            [f"strength Welch t (games {','.join(hi_games)} vs {','.join(lo_games)})",
             t_res.statistic, round(t_res.df, 1), t_res.pvalue, "|L^a| pooled"]
        )

    # response-coefficient diversity: Kruskal-Wallis with groups as samples
    phi = rotation.relative_rotation({g: table[g] for g in cycling})
    samples = [[float(phi[g][j]) for g in cycling] for j in range(len(groups))]
    kw = stats.kruskal_wallis(samples)
    rows.append(["Kruskal-Wallis on phi (groups)", kw.statistic, kw.df, kw.pvalue,
                 f"{len(groups)} groups x {len(cycling)} games"])

    # eigenvalue vs strength rank agreement
    lam = [predictions[g].eigenvalue for g in cycling]
    strength = [abs(sum(float(v) for v in table[g]) / len(table[g])) for g in cycling]
    rho = stats.spearman_rank(lam, strength)
    rows.append(["Spearman eigenvalue vs |mean L^a|", rho, "", "",
                 f"n={len(cycling)} games"])

    # per-group sensitivity: one-sample t of the group's phi values against 1
    for j, grp in enumerate(groups):
        res = stats.one_sample_t([float(phi[g][j]) for g in cycling], 1.0)
        rows.append([f"group {grp} phi vs 1", res.statistic, res.df, res.pvalue,
                     "one-sample t"])

    def _fmt(v):
        if isinstance(v, float):
            return f"{v:.4g}"
        return str(v)

    shown = [[r[0], _fmt(r[1]), _fmt(r[2]), _fmt(r[3]), r[4]] for r in rows]
    _print_table(shown, ["test", "statistic", "df", "p", "note"])

    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        with open(out / "stats.csv", "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["test", "statistic", "df", "p", "note"])
            writer.writerows(rows)
        print(f"\nwrote {out / 'stats.csv'}")
    return 0


# -- phase ---------------------------------------------------------------


def cmd_phase(args) -> int:
    matrices = io.load_matrices(args.matrices)
    wanted = _parse_game_list(args.games)
    if wanted is not None:
        missing = [g for g in wanted if g not in matrices]
        if missing:
            raise ValidationError(f"games not in {args.matrices}: {missing}")
        matrices = {g: matrices[g] for g in wanted}
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    for gid, m in matrices.items():
        pred = games.predict(m)
        pp, qq, dp, dq = replicator.phase_field_sample(pred.normalized, args.grid_n)
        path = out / f"phase_game{gid}.csv"
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["p", "q", "dp", "dq"])
            for i in range(args.grid_n):
                for j in range(args.grid_n):
                    writer.writerow([pp[i, j], qq[i, j], dp[i, j], dq[i, j]])
        print(f"wrote {path}")
        if not args.no_plot:
            from . import plots

            fig_path = out / f"phase_game{gid}.png"
            plots.save_phase_field(pp, qq, dp, dq, fig_path, nash=pred.nash,
                                   title=f"game {gid}")
            print(f"wrote {fig_path}")
    return 0


# -- parser --------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="evorot",
        description="rotation observables and predictions for switching-incentive "
        "two-population games",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("predict", help="per-game equilibrium and rotation prediction")
    p.add_argument("--matrices", required=True, help="game table CSV")
    p.add_argument("--games", help="comma-separated game ids (default: all)")
    p.add_argument("--out", help="directory for predictions.csv")
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("simulate", help="run the agent simulator over a schedule")
    p.add_argument("--schedule", required=True, help="schedule CSV")
    p.add_argument("--config", help="simulation config JSON")
    p.add_argument("--seed", type=int, default=None, help="base seed (overrides config)")
    p.add_argument("--groups", type=int, default=1, help="number of replicate groups")
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("analyze", help="rotation reports and tables from trajectories")
    p.add_argument("trajectories", nargs="+", help="trajectory CSV files")
    p.add_argument("--matrices", help="game table CSV for equilibrium-based metrics")
    p.add_argument("--games", help="restrict phi/R.R.C. to these game ids")
    p.add_argument("--out", default=".", help="output directory")
    p.add_argument("--no-plot", action="store_true", help="skip figure rendering")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("stats", help="inference battery over a rotation table")
    p.add_argument("--ltable", required=True, help="accumulated-rotation table CSV")
    p.add_argument("--matrices", required=True, help="game table CSV")
    p.add_argument("--games", help="override the cycling-game set")
    p.add_argument("--out", help="directory for stats.csv")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("phase", help="sampled replicator velocity fields")
    p.add_argument("--matrices", required=True, help="game table CSV")
    p.add_argument("--games", help="comma-separated game ids (default: all)")
    p.add_argument("--grid-n", type=int, default=12, help="grid points per axis")
    p.add_argument("--out", default=".", help="output directory")
    p.add_argument("--no-plot", action="store_true", help="skip figure rendering")
    p.set_defaults(func=cmd_phase)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except BrokenPipeError:
        return 1
    except (ValidationError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # internal failure
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
