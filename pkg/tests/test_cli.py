import json
import os


from hierarchyrank.cli import main
from hierarchyrank.synth import PlantedConfig, generate_planted

from conftest import records_from_network, write_records

FAST_SAMPLER = ["--iters", "6000", "--burnin", "1500", "--interval", "100",
                "--restarts", "3", "--seed", "11"]


def _planted_records_csv(tmp_path, name="records.csv", n=20, e=400, p=0.95, seed=4,
                         year=2005, discipline="synthetic"):
    net, _ = generate_planted(PlantedConfig(n_nodes=n, n_edges=e, p_down=p, seed=seed))
    recs = records_from_network(net, year=year, discipline=discipline)
    return write_records(tmp_path / name, recs)


def _read(path):
    with open(path, "rb") as fh:
        return fh.read()


def _same_files(dir_a, dir_b, names):
    for name in names:
        assert _read(os.path.join(dir_a, name)) == _read(os.path.join(dir_b, name)), name


# -- synth ----------------------------------------------------------------------


def test_synth_writes_edges_and_truth(tmp_path):
    out = tmp_path / "o"
    code = main(["synth", "--nodes", "8", "--edges", "50", "--pdown", "1.0",
                 "--seed", "3", "--out", str(out)])
    assert code == 0
    assert (out / "edges.csv").exists()
    assert (out / "truth.csv").exists()
    assert (out / "synth_manifest.json").exists()
    truth_lines = (out / "truth.csv").read_text().splitlines()
    assert truth_lines[0] == "institution,true_rank"
    assert truth_lines[1] == "inst_0001,1"


def test_synth_perfect_hierarchy_matches_truth(tmp_path):
    out = tmp_path / "o"
    assert main(["synth", "--nodes", "10", "--edges", "200", "--pdown", "1.0",
                 "--out", str(out)]) == 0
    from hierarchyrank import Ranking, load_edge_csv, rho

    net = load_edge_csv(str(out / "edges.csv"))
    ranks = {}
    with open(out / "truth.csv") as fh:
        next(fh)
        for line in fh:
            name, rank = line.strip().split(",")
            ranks[name] = int(rank)
    truth = Ranking([ranks[n] for n in net.registry.names])
    assert rho(net, truth) == 1.0


def test_synth_rejects_out_of_range_pdown(tmp_path, capsys):
    code = main(["synth", "--nodes", "10", "--edges", "50", "--pdown", "0.4",
                 "--out", str(tmp_path)])
    assert code == 2
    assert "p_down" in capsys.readouterr().err


# -- rank -----------------------------------------------------------------------


def test_rank_recovers_planted_top(tmp_path):
    records = _planted_records_csv(tmp_path, n=20, e=500, p=0.95, seed=4)
    out = tmp_path / "rank"
    code = main(["rank", records, *FAST_SAMPLER, "--out", str(out)])
    assert code == 0
    lines = (out / "ranking.csv").read_text().splitlines()
    assert lines[0] == "rank,institution,prestige_score,ci_low,ci_high"
    assert lines[1].split(",")[:2] == ["1", "inst_0001"]
    report = json.loads((out / "rank_report.json").read_text())
    assert set(report) == {"n_nodes", "n_edges", "total_weight", "best_rho", "best_score"}
    assert report["n_nodes"] == 20
    assert report["total_weight"] == 500
    # the sampler's optimum is at least the realized planted downward fraction
    assert report["best_rho"] >= 0.9


def test_rank_empty_after_filter_exits_1(tmp_path, capsys):
    records = _planted_records_csv(tmp_path, year=1995)
    code = main(["rank", records, "--years", "2000:2010", "--out", str(tmp_path / "x")])
    assert code == 1
    assert "empty network" in capsys.readouterr().err


def test_rank_bad_years_flag_exits_2(tmp_path, capsys):
    records = _planted_records_csv(tmp_path)
    assert main(["rank", records, "--years", "2010", "--out", str(tmp_path / "x")]) == 2
    assert main(["rank", records, "--years", "2010:2000", "--out", str(tmp_path / "y")]) == 2


def test_rank_malformed_records_exits_2(tmp_path, capsys):
    bad = tmp_path / "bad.csv"
    bad.write_text("person_id,phd_institution,phd_year,discipline,hire_institution\np1,A,20x5,d,B\n")
    assert main(["rank", str(bad), "--out", str(tmp_path / "x")]) == 2
    assert "line 2" in capsys.readouterr().err


def test_rank_deterministic_outputs(tmp_path):
    records = _planted_records_csv(tmp_path, n=12, e=150)
    out1, out2 = tmp_path / "a", tmp_path / "b"
    for out in (out1, out2):
        assert main(["rank", records, *FAST_SAMPLER, "--out", str(out)]) == 0
    _same_files(str(out1), str(out2), ["ranking.csv", "rank_report.json", "rank_manifest.json"])


def test_rank_sampler_config_file_with_flag_override(tmp_path):
    records = _planted_records_csv(tmp_path, n=10, e=100)
    cfg = tmp_path / "sampler.cfg"
    cfg.write_text("total_iterations=4000\nburn_in=1000\nsample_interval=100\nrestarts=2\nseed=5\n")
    out1 = tmp_path / "a"
    assert main(["rank", records, "--sampler-config", str(cfg), "--out", str(out1)]) == 0
    man = json.loads((out1 / "rank_manifest.json").read_text())
    assert man["sampler"]["total_iterations"] == 4000
    assert man["sampler"]["seed"] == 5
    out2 = tmp_path / "b"
    assert main(["rank", records, "--sampler-config", str(cfg), "--restarts", "4",
                 "--out", str(out2)]) == 0
    man2 = json.loads((out2 / "rank_manifest.json").read_text())
    assert man2["sampler"]["restarts"] == 4
    assert man2["sampler"]["total_iterations"] == 4000


def test_rank_whitelist_filter(tmp_path):
    records = _planted_records_csv(tmp_path, n=10, e=200)
    wl = tmp_path / "wl.txt"
    wl.write_text("inst_0001\ninst_0002\ninst_0003\n")
    out = tmp_path / "w"
    assert main(["rank", records, "--whitelist", str(wl), *FAST_SAMPLER,
                 "--out", str(out)]) == 0
    report = json.loads((out / "rank_report.json").read_text())
    assert report["n_nodes"] <= 3


# -- null -----------------------------------------------------------------------


def test_null_rejects_one_replicate(tmp_path, capsys):
    records = _planted_records_csv(tmp_path)
    code = main(["null", records, "--replicates", "1", "--out", str(tmp_path / "x")])
    assert code == 2
    assert "replicates" in capsys.readouterr().err


def test_null_from_edges_with_gap(tmp_path):
    net, _ = generate_planted(PlantedConfig(n_nodes=15, n_edges=400, p_down=0.9, seed=2))
    from hierarchyrank import write_edge_csv

    edges = tmp_path / "edges.csv"
    write_edge_csv(net, str(edges))
    out = tmp_path / "null"
    code = main(["null", "--edges", str(edges), "--replicates", "4",
                 *FAST_SAMPLER, "--out", str(out)])
    assert code == 0
    sig = json.loads((out / "significance.json").read_text())
    assert sig["degenerate"] is False
    assert sig["empirical"]["n"] == 4 and sig["null"]["n"] == 4
    assert sig["empirical_mean"] > sig["null_mean"]
    emp_lines = (out / "rho_empirical.csv").read_text().splitlines()
    assert emp_lines[0] == "replicate,rho"
    assert len(emp_lines) == 5


def test_null_degenerate_single_direction_network(tmp_path):
    edges = tmp_path / "edges.csv"
    edges.write_text("src,dst,weight\na,b,5\n")
    out = tmp_path / "null"
    code = main(["null", "--edges", str(edges), "--replicates", "3",
                 *FAST_SAMPLER, "--out", str(out)])
    assert code == 0
    sig = json.loads((out / "significance.json").read_text())
    assert sig["degenerate"] is True
    assert sig["t_statistic"] is None
    assert sig["empirical_mean"] == 1.0 and sig["null_mean"] == 1.0


def test_null_reciprocal_two_node_network_handled(tmp_path):
    edges = tmp_path / "edges.csv"
    edges.write_text("src,dst,weight\na,b,1\nb,a,1\n")
    out = tmp_path / "null"
    code = main(["null", "--edges", str(edges), "--replicates", "4",
                 *FAST_SAMPLER, "--out", str(out)])
    assert code == 0
    sig = json.loads((out / "significance.json").read_text())
    assert "degenerate" in sig
    assert sig["p_value_empirical"] is not None


def test_null_rejects_filters_with_edges(tmp_path, capsys):
    edges = tmp_path / "edges.csv"
    edges.write_text("src,dst,weight\na,b,2\nb,c,1\n")
    code = main(["null", "--edges", str(edges), "--years", "2000:2010",
                 "--out", str(tmp_path / "x")])
    assert code == 2


# -- metrics ----------------------------------------------------------------------


def _ranking_csv(tmp_path, records, out_name="rankdir"):
    out = tmp_path / out_name
    assert main(["rank", records, *FAST_SAMPLER, "--out", str(out)]) == 0
    return str(out / "ranking.csv")


def test_metrics_gini_equal_production(tmp_path):
    # 3-cycle: every institution produces exactly one hire
    rows = "person_id,phd_institution,phd_year,discipline,hire_institution\n" \
           "p1,A,2000,d,B\np2,B,2000,d,C\np3,C,2000,d,A\n"
    records = tmp_path / "records.csv"
    records.write_text(rows)
    out = tmp_path / "m"
    assert main(["metrics", "gini", str(records), "--out", str(out)]) == 0
    summary = json.loads((out / "metrics.json").read_text())
    assert summary["gini"] == 0.0


def test_metrics_lorenz_csv(tmp_path):
    records = _planted_records_csv(tmp_path, n=10, e=100)
    out = tmp_path / "m"
    assert main(["metrics", "lorenz", records, "--out", str(out)]) == 0
    lines = (out / "lorenz.csv").read_text().splitlines()
    assert lines[0] == "cum_institutions,cum_production"
    first = [float(v) for v in lines[1].split(",")]
    last = [float(v) for v in lines[-1].split(",")]
    assert first == [0.0, 0.0] and last == [1.0, 1.0]
    summary = json.loads((out / "metrics.json").read_text())
    assert 0.0 <= summary["gini"] <= 1.0


def test_metrics_rankchange_engineered_nine_percent(tmp_path):
    header = "person_id,phd_institution,phd_year,discipline,hire_institution\n"
    rows = [f"u{k},inst_30,2000,d,inst_01" for k in range(9)]
    rows += [f"d{k},inst_10,2000,d,inst_40" for k in range(91)]
    records = tmp_path / "records.csv"
    records.write_text(header + "\n".join(rows) + "\n")
    ranking = tmp_path / "ranking.csv"
    lines = ["rank,institution,prestige_score,ci_low,ci_high"]
    lines += [f"{k},inst_{k:02d},{float(k):.4f},{float(k):.4f},{float(k):.4f}"
              for k in range(1, 51)]
    ranking.write_text("\n".join(lines) + "\n")
    out = tmp_path / "m"
    assert main(["metrics", "rankchange", str(records), "--ranking", str(ranking),
                 "--out", str(out)]) == 0
    summary = json.loads((out / "metrics.json").read_text())
    assert summary["upward_fraction"] == 0.09
    assert summary["n_total"] == 100 and summary["n_up"] == 9
    assert summary["n_dropped"] == 0
    cs = (out / "rankchange.csv").read_text().splitlines()
    assert cs[0] == "person_id,phd_rank,hire_rank,relative_change"
    assert len(cs) == 101


def test_metrics_rankchange_requires_ranking(tmp_path, capsys):
    records = _planted_records_csv(tmp_path)
    assert main(["metrics", "rankchange", records, "--out", str(tmp_path / "x")]) == 2


def test_metrics_rankchange_reports_dropped(tmp_path):
    records = _planted_records_csv(tmp_path, n=12, e=150)
    # rank only a subset by whitelisting, then score the full record set
    wl = tmp_path / "wl.txt"
    wl.write_text("\n".join(f"inst_{k:04d}" for k in range(1, 7)))
    subset_out = tmp_path / "subset"
    assert main(["rank", records, "--whitelist", str(wl), *FAST_SAMPLER,
                 "--out", str(subset_out)]) == 0
    out = tmp_path / "m"
    assert main(["metrics", "rankchange", records, "--ranking",
                 str(subset_out / "ranking.csv"), "--out", str(out)]) == 0
    summary = json.loads((out / "metrics.json").read_text())
    assert summary["n_dropped"] > 0


def test_metrics_ks_identical_cohorts(tmp_path):
    records = _planted_records_csv(tmp_path, n=10, e=120, year=2005)
    ranking = _ranking_csv(tmp_path, records)
    out = tmp_path / "m"
    assert main(["metrics", "ks", records, "--ranking", ranking,
                 "--cohort", "2000:2010", "--cohort", "2000:2010",
                 "--out", str(out)]) == 0
    summary = json.loads((out / "metrics.json").read_text())
    assert summary["ks_D"] == 0.0
    assert (out / "rankchange_cohort1.csv").exists()
    assert (out / "rankchange_cohort2.csv").exists()


def test_metrics_ks_requires_two_cohorts(tmp_path):
    records = _planted_records_csv(tmp_path)
    ranking = _ranking_csv(tmp_path, records)
    assert main(["metrics", "ks", records, "--ranking", ranking,
                 "--cohort", "2000:2010", "--out", str(tmp_path / "x")]) == 2


def test_metrics_ks_empty_cohort_exits_1(tmp_path, capsys):
    records = _planted_records_csv(tmp_path, year=2005)
    ranking = _ranking_csv(tmp_path, records)
    code = main(["metrics", "ks", records, "--ranking", ranking,
                 "--cohort", "2000:2010", "--cohort", "1980:1990",
                 "--out", str(tmp_path / "x")])
    assert code == 1
    assert "no records" in capsys.readouterr().err


def test_rank_top_flag_truncates_display_only(tmp_path, capsys):
    records = _planted_records_csv(tmp_path, n=12, e=150)
    out = tmp_path / "r"
    assert main(["rank", records, *FAST_SAMPLER, "--top", "2", "--out", str(out)]) == 0
    shown = [ln for ln in capsys.readouterr().out.splitlines() if ln.strip().startswith(("1 ", "2 ", "3 "))]
    assert len(shown) == 2
    assert len((out / "ranking.csv").read_text().splitlines()) == 13  # header + all 12 rows


# -- oracle ----------------------------------------------------------------------


def test_oracle_three_cycle(tmp_path):
    edges = tmp_path / "edges.csv"
    edges.write_text("src,dst,weight\na,b,1\nb,c,1\nc,a,1\n")
    out = tmp_path / "o"
    assert main(["oracle", str(edges), "--out", str(out)]) == 0
    result = json.loads((out / "oracle.json").read_text())
    assert result["optimal_score"] == 1
    assert abs(result["optimal_rho"] - 2 / 3) < 1e-12
    assert result["n_optima"] == 3
    assert ["a", "b", "c"] in result["optima"]


def test_oracle_single_edge(tmp_path):
    edges = tmp_path / "edges.csv"
    edges.write_text("src,dst,weight\na,b,1\n")
    out = tmp_path / "o"
    assert main(["oracle", str(edges), "--out", str(out)]) == 0
    assert json.loads((out / "oracle.json").read_text())["optimal_score"] == 1


def test_oracle_size_limit_exits_1(tmp_path, capsys):
    edges = tmp_path / "edges.csv"
    rows = [f"n{k:02d},n{k + 1:02d},1" for k in range(11)]  # 12 nodes
    edges.write_text("src,dst,weight\n" + "\n".join(rows) + "\n")
    assert main(["oracle", str(edges), "--out", str(tmp_path / "o")]) == 1
    assert "brute force" in capsys.readouterr().err


# -- replay / manifests ------------------------------------------------------------


def test_manifest_replay_reproduces_bytes(tmp_path):
    records = _planted_records_csv(tmp_path, n=10, e=120)
    out1 = tmp_path / "a"
    assert main(["rank", records, *FAST_SAMPLER, "--out", str(out1)]) == 0
    out2 = tmp_path / "b"
    assert main(["replay", str(out1 / "rank_manifest.json"), "--out", str(out2)]) == 0
    _same_files(str(out1), str(out2), ["ranking.csv", "rank_report.json", "rank_manifest.json"])


def test_manifest_has_contract_fields(tmp_path):
    records = _planted_records_csv(tmp_path, n=8, e=80)
    out = tmp_path / "a"
    assert main(["rank", records, *FAST_SAMPLER, "--years", "2000:2010",
                 "--out", str(out)]) == 0
    man = json.loads((out / "rank_manifest.json").read_text())
    assert man["command"] == "rank"
    assert man["inputs"] == [records]
    assert man["filter"]["years"] == [2000, 2010]
    assert man["sampler"]["restarts"] == 3
    assert man["tool_version"]
    assert man["outputs"] == ["ranking.csv", "rank_report.json"]
    assert "--out" not in man["argv"]


def test_replay_synth_into_fresh_dir(tmp_path):
    out1 = tmp_path / "a"
    assert main(["synth", "--nodes", "6", "--edges", "30", "--pdown", "0.8",
                 "--seed", "9", "--out", str(out1)]) == 0
    out2 = tmp_path / "b"
    assert main(["replay", str(out1 / "synth_manifest.json"), "--out", str(out2)]) == 0
    _same_files(str(out1), str(out2), ["edges.csv", "truth.csv", "synth_manifest.json"])
