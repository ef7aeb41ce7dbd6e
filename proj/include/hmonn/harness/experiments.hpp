#pragma once

/*
 End-to-end experiment drivers behind the command-line tool.

 synthetic  36-dataset grid, HMONN vs naive per dataset, summary by output count
 uci        derived multi-output datasets per input file, averaged per file
 sweep      (k, theta) accuracy grid for one file
 inspect    relation statistics of one file

 Every report is a pure function of its options: no timestamps, no
 dependence on thread count. Jobs are scheduled with parallel_for and their
 results land in slots keyed by job index.
*/

#include <algorithm>
#include <bit>
#include <cstdint>
#include <filesystem>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "hmonn/all.hpp"
#include "hmonn/harness/report.hpp"

namespace hmonn::harness {

namespace fs = std::filesystem;

struct ExperimentOptions {
  std::uint64_t seed = 1;
  std::size_t k = 7;
  double theta = 0.5;
  std::size_t folds = 10;
  std::size_t jobs = 1;
  MlpConfig mlp;  // seed is replaced per fold

  [[nodiscard]] HmonnConfig hmonn_config() const {
    HmonnConfig c;
    c.k = k;
    c.theta = theta;
    c.mlp = mlp;
    return c;
  }
};

// Seed of the fold split for the `ordinal`-th dataset of a run.
inline std::uint64_t split_seed(std::uint64_t master, std::size_t ordinal) {
  return derive_seed(master, {0x5eedULL, ordinal});
}

inline void add_common_metadata(Metadata& m, const ExperimentOptions& o) {
  m.add("tool", std::string("hmonn ") + kToolVersion)
      .add("seed", static_cast<unsigned long long>(o.seed))
      .add("k", o.k)
      .add("theta", o.theta)
      .add("folds", o.folds)
      .add("mlp.hidden_nodes", o.mlp.hidden_nodes ? std::to_string(o.mlp.hidden_nodes)
                                                  : std::string("2*(inputs+outputs)"))
      .add("mlp.learning_rate", o.mlp.learning_rate)
      .add("mlp.patience", o.mlp.patience)
      .add("mlp.max_epochs", o.mlp.max_epochs)
      .add("mlp.validation_fraction", o.mlp.validation_fraction)
      .add("mlp.model", std::string("logistic hidden+output, squared error, per-instance SGD, init uniform[-0.5,0.5]"))
      .add("knn.distance", std::string("sqrt(theta*input_sq + (1-theta)*output_mismatches), nominal overlap"))
      .add("knn.ties", std::string("neighbors by (distance, store index); vote ties to nearest supporter"))
      .add("accuracy", std::string("MOD accuracy: own label or (x, z) labeled in the fold's training set"));
}

struct DatasetResult {
  std::string name;
  std::string provenance;
  std::size_t instances = 0;
  std::size_t inputs = 0;
  std::size_t outputs = 0;
  double multi_output_fraction = 0.0;
  std::vector<double> naive_folds;
  std::vector<double> hmonn_folds;
  double naive_mean = 0.0;
  double hmonn_mean = 0.0;
  WilcoxonResult test;  // fold-paired, first sample is HMONN
};

inline std::string verdict(const WilcoxonResult& w, double alpha = 0.05) {
  if (!w.sufficient) return "n/a";
  if (!w.significant(alpha)) return "none";
  return w.direction == Direction::FirstGreater ? "hmonn" : w.direction == Direction::SecondGreater ? "naive" : "none";
}

inline std::string p_text(const WilcoxonResult& w) { return w.sufficient ? exact_number(w.p_value) : "n/a"; }

inline DatasetResult evaluate_dataset(const Dataset& d, std::string name, const ExperimentOptions& o,
                                      std::uint64_t split_seed_value, std::size_t fold_jobs = 1) {
  DatasetResult r;
  r.name = std::move(name);
  r.provenance = d.provenance();
  r.instances = d.size();
  r.inputs = d.schema().input_count();
  r.outputs = d.schema().output_count();
  r.multi_output_fraction = build_relation_index(d).multi_output_fraction();
  const auto split = make_folds(d.size(), o.folds, split_seed_value);
  auto paired = cross_validate_paired(d, o.hmonn_config(), split, fold_jobs);
  r.naive_folds = std::move(paired.naive);
  r.hmonn_folds = std::move(paired.hmonn);
  r.naive_mean = mean(r.naive_folds);
  r.hmonn_mean = mean(r.hmonn_folds);
  r.test = wilcoxon_signed_rank(r.hmonn_folds, r.naive_folds);
  return r;
}

// ---------------------------------------------------------------------------
// synthetic

struct SyntheticOptions {
  ExperimentOptions common;
  FeatureType kind = FeatureType::Real;
  double sigma = 0.05;
  std::size_t instances = 5000;
  bool write_datasets = false;
};

struct GroupSummary {
  std::string label;
  std::vector<double> naive;  // dataset means in grid order
  std::vector<double> hmonn;
  double naive_mean = 0.0;
  double hmonn_mean = 0.0;
  WilcoxonResult test;  // dataset-paired, first sample is HMONN

  [[nodiscard]] double gap() const noexcept { return hmonn_mean - naive_mean; }
};

struct SyntheticReport {
  SyntheticOptions options;
  std::vector<SyntheticConfig> configs;
  std::vector<DatasetResult> datasets;
  std::vector<GroupSummary> groups;  // 2-, 3-, 4-output
  GroupSummary total;
  Metadata metadata;

  [[nodiscard]] bool gap_increasing() const { return groups.back().gap() > groups.front().gap(); }
};

inline std::string synthetic_name(const SyntheticConfig& c) {
  return "o" + std::to_string(c.outputs) + "_c" + std::to_string(c.centroids) + "_m" + exact_number(c.multiplier);
}

inline GroupSummary summarize(std::string label, const std::vector<const DatasetResult*>& rows) {
  GroupSummary g;
  g.label = std::move(label);
  for (const auto* r : rows) {
    g.naive.push_back(r->naive_mean);
    g.hmonn.push_back(r->hmonn_mean);
  }
  g.naive_mean = mean(g.naive);
  g.hmonn_mean = mean(g.hmonn);
  g.test = wilcoxon_signed_rank(g.hmonn, g.naive);
  return g;
}

inline SyntheticReport run_synthetic(const SyntheticOptions& opt) {
  SyntheticReport rep;
  rep.options = opt;
  rep.configs = grid_configs(opt.kind, opt.common.seed, opt.sigma, opt.instances);
  rep.datasets.resize(rep.configs.size());
  parallel_for(rep.configs.size(), opt.common.jobs, [&](std::size_t i) {
    const Dataset d = generate_synthetic(rep.configs[i]);
    rep.datasets[i] = evaluate_dataset(d, synthetic_name(rep.configs[i]), opt.common, split_seed(opt.common.seed, i));
  });

  std::vector<const DatasetResult*> all;
  for (auto o : kGridOutputs) {
    std::vector<const DatasetResult*> rows;
    for (std::size_t i = 0; i < rep.configs.size(); ++i)
      if (rep.configs[i].outputs == o) rows.push_back(&rep.datasets[i]);
    rep.groups.push_back(summarize(std::to_string(o) + "-Output", rows));
  }
  for (const auto& d : rep.datasets) all.push_back(&d);
  rep.total = summarize("Total", all);

  Metadata& m = rep.metadata;
  m.add("command", std::string("synthetic"));
  m.add("kind", std::string(to_string(opt.kind)));
  add_common_metadata(m, opt.common);
  if (opt.kind == FeatureType::Real) m.add("sigma", opt.sigma);
  m.add("instances", opt.instances)
      .add("grid", std::string("outputs {2,3,4} x centroids {2,4,6,8} x multiplier {1,1.5,2}; inputs = 3*outputs"))
      .add("probability_vectors", std::string("round-robin over centroids; support 2-4 output vectors, flat Dirichlet weights"))
      .add("significance.dataset", std::string("Wilcoxon signed-rank over 10 fold pairs, two-sided, alpha 0.05"))
      .add("significance.summary", std::string("Wilcoxon signed-rank over dataset-mean pairs, two-sided, alpha 0.05"));
  const double g2 = rep.groups.front().gap(), g4 = rep.groups.back().gap();
  m.add("gap_trend", rep.gap_increasing()
                         ? "4-output gap " + fixed(g4, 4) + " exceeds 2-output gap " + fixed(g2, 4)
                         : "NOT increasing: 4-output gap " + fixed(g4, 4) + " <= 2-output gap " + fixed(g2, 4) +
                               " (reported only)");
  return rep;
}

inline std::string synthetic_summary_text(const SyntheticReport& rep) {
  std::ostringstream out;
  rep.metadata.write(out);
  out << '\n';
  std::vector<std::vector<std::string>> t;
  std::vector<std::string> head{"Model"};
  for (const auto& g : rep.groups) head.push_back(g.label);
  head.push_back("Total");
  t.push_back(head);
  auto mark = [](const GroupSummary& g, bool hm) {
    const bool win = g.test.significant() &&
                     (hm ? g.test.direction == Direction::FirstGreater : g.test.direction == Direction::SecondGreater);
    return fixed(hm ? g.hmonn_mean : g.naive_mean) + (win ? "*" : " ");
  };
  std::vector<std::string> h{"HMONN"}, n{"Naive"}, gap{"Gap"}, p{"p-value"};
  for (const auto* g : {&rep.groups[0], &rep.groups[1], &rep.groups[2], &rep.total}) {
    h.push_back(mark(*g, true));
    n.push_back(mark(*g, false));
    gap.push_back(fixed(g->gap()) + " ");
    p.push_back((g->test.sufficient ? p_value_text(g->test.p_value) : std::string("n/a")) + " ");
  }
  t.push_back(h);
  t.push_back(n);
  t.push_back(gap);
  t.push_back(p);
  out << "HMONN vs naive, " << to_string(rep.options.kind) << "-valued synthetic grid (" << rep.datasets.size()
      << " datasets)\n";
  out << aligned_table(t);
  out << "* significantly greater (p < 0.05)\n\n";
  const auto& w = rep.total.test;
  out << "Overall Wilcoxon (dataset means, n=" << w.n << "): W+=" << exact_number(w.w_plus)
      << " W-=" << exact_number(w.w_minus) << " p=" << p_text(w) << " verdict=" << verdict(w) << '\n';

  std::size_t sig_h = 0, sig_n = 0;
  for (const auto& d : rep.datasets) {
    sig_h += verdict(d.test) == "hmonn";
    sig_n += verdict(d.test) == "naive";
  }
  out << "Datasets with significant fold-level difference: hmonn " << sig_h << ", naive " << sig_n << " of "
      << rep.datasets.size() << '\n';
  return out.str();
}

inline std::vector<fs::path> write_synthetic(const SyntheticReport& rep, const fs::path& dir) {
  fs::create_directories(dir);
  const std::string stem = std::string("synthetic_") + to_string(rep.options.kind);
  std::vector<fs::path> written;

  std::ostringstream ds;
  rep.metadata.write(ds);
  ds << csv_row({"dataset", "outputs", "inputs", "centroids", "multiplier", "probability_vectors", "instances",
                 "multi_output_fraction", "naive_mean", "hmonn_mean", "gap", "wilcoxon_p", "significant", "provenance"});
  for (std::size_t i = 0; i < rep.datasets.size(); ++i) {
    const auto& d = rep.datasets[i];
    const auto& c = rep.configs[i];
    ds << csv_row({d.name, std::to_string(c.outputs), std::to_string(c.input_count()), std::to_string(c.centroids),
                   exact_number(c.multiplier), std::to_string(c.probability_vector_count()), std::to_string(d.instances),
                   exact_number(d.multi_output_fraction), exact_number(d.naive_mean), exact_number(d.hmonn_mean),
                   exact_number(d.hmonn_mean - d.naive_mean), p_text(d.test), verdict(d.test), d.provenance});
  }
  written.push_back(dir / (stem + "_datasets.csv"));
  write_text(written.back(), ds.str());

  std::ostringstream folds;
  rep.metadata.write(folds);
  folds << csv_row({"dataset", "fold", "naive", "hmonn"});
  for (const auto& d : rep.datasets)
    for (std::size_t f = 0; f < d.naive_folds.size(); ++f)
      folds << csv_row({d.name, std::to_string(f), exact_number(d.naive_folds[f]), exact_number(d.hmonn_folds[f])});
  written.push_back(dir / (stem + "_folds.csv"));
  write_text(written.back(), folds.str());

  std::ostringstream sum;
  rep.metadata.write(sum);
  sum << csv_row({"group", "naive_mean", "hmonn_mean", "gap", "datasets", "wilcoxon_p", "verdict"});
  for (const auto* g : {&rep.groups[0], &rep.groups[1], &rep.groups[2], &rep.total})
    sum << csv_row({g->label, exact_number(g->naive_mean), exact_number(g->hmonn_mean), exact_number(g->gap()),
                    std::to_string(g->naive.size()), p_text(g->test), verdict(g->test)});
  written.push_back(dir / (stem + "_summary.csv"));
  write_text(written.back(), sum.str());

  written.push_back(dir / (stem + "_summary.txt"));
  write_text(written.back(), synthetic_summary_text(rep));

  if (rep.options.write_datasets) {
    const fs::path data_dir = dir / (stem + "_data");
    fs::create_directories(data_dir);
    for (std::size_t i = 0; i < rep.configs.size(); ++i) {
      const fs::path p = data_dir / (rep.datasets[i].name + ".csv");
      save_dataset(p, generate_synthetic(rep.configs[i]));
      written.push_back(p);
      written.push_back(default_sidecar(p));
    }
  }
  return written;
}

// ---------------------------------------------------------------------------
// file-based commands

// Loads a CSV (with sidecar) or ARFF file, defaulting the output column to the
// last declared column, and imputes missing cells.
inline Dataset load_for_experiment(const fs::path& file, std::vector<std::string> targets,
                                   const fs::path& schema = {}) {
  if (targets.empty()) {
    auto names = column_names(file);
    if (names.empty()) throw ParseError("'" + file.string() + "' declares no columns");
    targets.push_back(names.back());
  }
  return impute_missing(load_dataset(file, targets, schema));
}

struct UciOptions {
  ExperimentOptions common;
  std::size_t num_outputs = 2;
  std::vector<std::string> targets;  // empty: last column
  fs::path schema;                   // sidecar override for a single CSV file
};

struct UciFileResult {
  fs::path file;
  std::string error;  // non-empty: the file failed and was skipped
  std::size_t instances = 0;
  std::size_t features = 0;
  std::size_t nominal = 0;
  bool derived = false;  // false: the file already declared several outputs
  std::vector<DatasetResult> runs;
  double naive_mean = 0.0;
  double hmonn_mean = 0.0;
  WilcoxonResult test;  // all fold pairs of all runs, first sample is HMONN
};

struct UciReport {
  UciOptions options;
  std::vector<UciFileResult> files;
  Metadata metadata;

  [[nodiscard]] bool any_failed() const {
    return std::any_of(files.begin(), files.end(), [](const UciFileResult& f) { return !f.error.empty(); });
  }
};

inline UciFileResult run_uci_file(const fs::path& file, const UciOptions& opt) {
  UciFileResult r;
  r.file = file;
  try {
    const Dataset d = load_for_experiment(file, opt.targets, opt.schema);
    r.instances = d.size();
    r.features = d.schema().input_count();
    r.nominal = d.schema().nominal_input_count();
    if (d.schema().output_count() >= 2) {
      r.runs.push_back(evaluate_dataset(d, "declared", opt.common, split_seed(opt.common.seed, 0), opt.common.jobs));
    } else {
      r.derived = true;
      const auto subsets = derivation_subsets(d, opt.num_outputs);
      r.runs.resize(subsets.size());
      parallel_for(subsets.size(), opt.common.jobs, [&](std::size_t i) {
        const Dataset derived = derive_dataset(d, subsets[i]);
        std::string name;
        for (const auto& c : derived.schema().outputs()) name += (name.empty() ? "" : "+") + c.name;
        r.runs[i] = evaluate_dataset(derived, name, opt.common, split_seed(opt.common.seed, i));
      });
    }
    std::vector<double> hm, nv, all_h, all_n;
    for (const auto& run : r.runs) {
      hm.push_back(run.hmonn_mean);
      nv.push_back(run.naive_mean);
      all_h.insert(all_h.end(), run.hmonn_folds.begin(), run.hmonn_folds.end());
      all_n.insert(all_n.end(), run.naive_folds.begin(), run.naive_folds.end());
    }
    r.hmonn_mean = mean(hm);
    r.naive_mean = mean(nv);
    r.test = wilcoxon_signed_rank(all_h, all_n);
  } catch (const std::exception& e) {
    r.error = e.what();
    r.runs.clear();
  }
  return r;
}

inline UciReport run_uci(const std::vector<fs::path>& files, const UciOptions& opt) {
  if (opt.num_outputs < 2 || opt.num_outputs > 4) throw PreconditionError("--outputs must be 2, 3 or 4");
  UciReport rep;
  rep.options = opt;
  for (const auto& f : files) rep.files.push_back(run_uci_file(f, opt));
  Metadata& m = rep.metadata;
  m.add("command", std::string("uci")).add("outputs", opt.num_outputs);
  add_common_metadata(m, opt.common);
  std::string targets;
  for (const auto& t : opt.targets) targets += (targets.empty() ? "" : ",") + t;
  m.add("targets", targets.empty() ? std::string("last column") : targets)
      .add("imputation", std::string("real: column mean, nominal: column mode"))
      .add("derivation", std::string("single-output files: every (outputs-1)-subset of nominal inputs promoted, class last; "
                                     "multi-output files: evaluated as declared"))
      .add("significance", std::string("Wilcoxon signed-rank over all fold pairs of a file, two-sided, alpha 0.05"));
  return rep;
}

inline std::vector<fs::path> write_uci(const UciReport& rep, const fs::path& dir) {
  fs::create_directories(dir);
  const std::string stem = "uci_" + std::to_string(rep.options.num_outputs) + "o";
  std::vector<fs::path> written;

  std::ostringstream res;
  rep.metadata.write(res);
  res << csv_row({"file", "status", "instances", "features", "nominal", "derived_datasets", "naive_mean", "hmonn_mean",
                  "gap", "wilcoxon_p", "significant", "error"});
  for (const auto& f : rep.files) {
    const bool ok = f.error.empty();
    res << csv_row({f.file.filename().string(), ok ? "ok" : "failed", std::to_string(f.instances),
                    std::to_string(f.features), std::to_string(f.nominal),
                    ok ? std::to_string(f.derived ? f.runs.size() : 0) : "0", ok ? exact_number(f.naive_mean) : "",
                    ok ? exact_number(f.hmonn_mean) : "", ok ? exact_number(f.hmonn_mean - f.naive_mean) : "",
                    ok ? p_text(f.test) : "", ok ? verdict(f.test) : "", f.error});
  }
  written.push_back(dir / (stem + "_results.csv"));
  write_text(written.back(), res.str());

  std::ostringstream runs;
  rep.metadata.write(runs);
  runs << csv_row({"file", "run", "outputs", "instances", "multi_output_fraction", "naive_mean", "hmonn_mean",
                   "wilcoxon_p", "significant"});
  for (const auto& f : rep.files)
    for (std::size_t i = 0; i < f.runs.size(); ++i) {
      const auto& r = f.runs[i];
      runs << csv_row({f.file.filename().string(), std::to_string(i), r.name, std::to_string(r.instances),
                       exact_number(r.multi_output_fraction), exact_number(r.naive_mean), exact_number(r.hmonn_mean),
                       p_text(r.test), verdict(r.test)});
    }
  written.push_back(dir / (stem + "_runs.csv"));
  write_text(written.back(), runs.str());

  std::ostringstream txt;
  rep.metadata.write(txt);
  txt << '\n';
  std::vector<std::vector<std::string>> t{{"Data set", "H", "NI", "Feat", "N", "Derived", "p", "Winner"}};
  std::size_t sig_h = 0, sig_n = 0;
  for (const auto& f : rep.files) {
    if (!f.error.empty()) {
      t.push_back({f.file.filename().string(), "FAILED", "", "", "", "", "", ""});
      continue;
    }
    const auto v = verdict(f.test);
    sig_h += v == "hmonn";
    sig_n += v == "naive";
    t.push_back({f.file.filename().string(), fixed(f.hmonn_mean) + (v == "hmonn" ? "*" : " "),
                 fixed(f.naive_mean) + (v == "naive" ? "*" : " "), std::to_string(f.features), std::to_string(f.nominal),
                 f.derived ? std::to_string(f.runs.size()) : std::string("declared"),
                 f.test.sufficient ? p_value_text(f.test.p_value) : std::string("n/a"), v});
  }
  t.push_back({"# Sig", std::to_string(sig_h) + " ", std::to_string(sig_n) + " ", "", "", "", "", ""});
  txt << "HMONN (H) vs naive independence (NI), " << rep.options.num_outputs << "-output\n";
  txt << aligned_table(t);
  txt << "* significantly greater (p < 0.05)\n";
  for (const auto& f : rep.files)
    if (!f.error.empty()) txt << "failed: " << f.file.filename().string() << ": " << f.error << '\n';
  written.push_back(dir / (stem + "_summary.txt"));
  write_text(written.back(), txt.str());
  return written;
}

struct SweepOptions {
  ExperimentOptions common;
  std::vector<std::size_t> ks{1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11};
  std::vector<double> thetas{0.0, 0.25, 0.5, 0.75, 1.0};
  std::vector<std::string> targets;
  fs::path schema;
};

struct SweepReport {
  std::string dataset;
  AccuracyGrid grid;
  Metadata metadata;
};

// The fold split matches `uci` on the same file (ordinal 0), so a one-cell
// sweep reproduces its HMONN accuracy.
inline SweepReport run_sweep(const fs::path& file, const SweepOptions& opt) {
  const Dataset d = load_for_experiment(file, opt.targets, opt.schema);
  const auto split = make_folds(d.size(), opt.common.folds, split_seed(opt.common.seed, 0));
  SweepReport rep;
  rep.dataset = file.filename().string();
  rep.grid = sweep(d, opt.ks, opt.thetas, split, opt.common.mlp, opt.common.jobs);
  Metadata& m = rep.metadata;
  m.add("command", std::string("sweep")).add("dataset", rep.dataset);
  ExperimentOptions shown = opt.common;
  add_common_metadata(m, shown);
  std::string ks, ts;
  for (auto k : opt.ks) ks += (ks.empty() ? "" : " ") + std::to_string(k);
  for (auto t : opt.thetas) ts += (ts.empty() ? "" : " ") + exact_number(t);
  m.add("k_values", ks).add("theta_values", ts).add("instances", d.size());
  return rep;
}

inline std::vector<fs::path> write_sweep(const SweepReport& rep, const fs::path& dir) {
  fs::create_directories(dir);
  const auto& g = rep.grid;
  std::ostringstream grid;
  rep.metadata.write(grid);
  std::vector<std::string> head{"k"};
  for (auto t : g.thetas) head.push_back("theta=" + exact_number(t));
  grid << csv_row(head);
  for (std::size_t ki = 0; ki < g.ks.size(); ++ki) {
    std::vector<std::string> row{std::to_string(g.ks[ki])};
    for (std::size_t ti = 0; ti < g.thetas.size(); ++ti) row.push_back(exact_number(g.mean_at(ki, ti)));
    grid << csv_row(row);
  }
  std::ostringstream lng;
  rep.metadata.write(lng);
  lng << csv_row({"k", "theta", "accuracy"});
  for (std::size_t ki = 0; ki < g.ks.size(); ++ki)
    for (std::size_t ti = 0; ti < g.thetas.size(); ++ti)
      lng << csv_row({std::to_string(g.ks[ki]), exact_number(g.thetas[ti]), exact_number(g.mean_at(ki, ti))});
  std::vector<fs::path> written{dir / "sweep_grid.csv", dir / "sweep_long.csv"};
  write_text(written[0], grid.str());
  write_text(written[1], lng.str());
  return written;
}

// ---------------------------------------------------------------------------
// inspect

inline std::string render_inputs(const Schema& s, const InputKey& key) {
  std::string out = "(";
  for (std::size_t i = 0; i < key.size(); ++i) {
    if (i) out += ", ";
    const auto& col = s.inputs()[i];
    if (const auto* n = std::get_if<NominalKind>(&col.kind))
      out += n->values[static_cast<std::size_t>(key[i])];
    else
      out += exact_number(std::bit_cast<double>(key[i]));
  }
  return out + ")";
}

inline std::string render_outputs(const Schema& s, const OutputVector& y) {
  std::string out = "(";
  for (std::size_t j = 0; j < y.size(); ++j)
    out += (j ? ", " : "") + std::get<NominalKind>(s.outputs()[j].kind).values[static_cast<std::size_t>(y[j])];
  return out + ")";
}

// Relation statistics: instance count, schema, multi-output fraction and the
// input vectors carrying the most distinct output vectors.
inline void inspect(const Dataset& d, std::ostream& out, std::size_t top = 10) {
  const Dataset complete = d.has_missing() ? impute_missing(d) : d;
  const Schema& s = complete.schema();
  out << "dataset: " << (complete.provenance().empty() ? std::string("(unnamed)") : complete.provenance()) << '\n';
  out << "instances: " << complete.size() << (d.has_missing() ? " (missing cells imputed)" : "") << '\n';
  out << "inputs: " << s.input_count() << " (" << s.nominal_input_count() << " nominal, "
      << s.input_count() - s.nominal_input_count() << " real)\n";
  out << "outputs: " << s.output_count() << " [";
  for (std::size_t j = 0; j < s.output_count(); ++j)
    out << (j ? ", " : "") << s.outputs()[j].name << ":" << arity_of(s.outputs()[j].kind);
  out << "]\n";
  const RelationIndex index = build_relation_index(complete);
  out << "distinct input vectors: " << index.key_count() << '\n';
  out << "input vectors with multiple output vectors: " << index.multi_output_keys() << '\n';
  out << "multi-output fraction: " << fixed(index.multi_output_fraction()) << '\n';

  std::vector<const RelationIndex::Entry*> entries;
  for (const auto& e : index.entries())
    if (e.outputs.size() >= 2) entries.push_back(&e);
  std::stable_sort(entries.begin(), entries.end(), [](const auto* a, const auto* b) {
    if (a->outputs.size() != b->outputs.size()) return a->outputs.size() > b->outputs.size();
    return a->occurrences > b->occurrences;
  });
  if (entries.size() > top) entries.resize(top);
  if (!entries.empty()) out << "top input vectors by distinct output vectors:\n";
  for (const auto* e : entries) {
    out << "  " << render_inputs(s, e->key) << " x" << e->occurrences << " -> " << e->outputs.size() << " outputs:";
    for (const auto& y : e->outputs) out << ' ' << render_outputs(s, y);
    out << '\n';
  }
}

}  // namespace hmonn::harness
