// Experiment runner for the attribute-inference toolkit: data preparation,
// target-model training and serving, attack execution, evaluation, and the
// paper-grid presets.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "miai/datagen.hpp"
#include "miai/dataset.hpp"
#include "miai/experiment.hpp"
#include "miai/http_oracle.hpp"
#include "miai/metrics.hpp"
#include "miai/model.hpp"
#include "miai/report.hpp"

namespace {

namespace fs = std::filesystem;

std::string default_data_dir() {
  const char* env = std::getenv("MIAI_DATA_DIR");
  return env && *env ? env : "data";
}

std::pair<std::string, int> parse_bind(const std::string& bind) {
  auto colon = bind.rfind(':');
  if (colon == std::string::npos)
    miai::fail("bind address '", bind, "' must be host:port");
  return {bind.substr(0, colon), std::stoi(bind.substr(colon + 1))};
}

int cmd_synth_data(const std::string& dataset, const std::string& out_csv,
                   const std::string& out_schema, uint64_t seed, double scale) {
  miai::Dataset d;
  miai::Schema schema;
  if (dataset == "gss") {
    miai::GssGenParams p;
    if (seed) p.seed = seed;
    if (scale != 1.0) p = p.scaled(scale);
    d = miai::generate_gss_like(p);
    schema = miai::gss_schema();
  } else if (dataset == "adult") {
    miai::AdultGenParams p;
    if (seed) p.seed = seed;
    if (scale != 1.0) p = p.scaled(scale);
    d = miai::generate_adult_like(p);
    schema = miai::adult_schema();
  } else {
    miai::fail("unknown dataset '", dataset, "', expected gss or adult");
  }
  if (!out_csv.empty()) {
    fs::create_directories(fs::path(out_csv).parent_path().empty()
                               ? "."
                               : fs::path(out_csv).parent_path().string());
    miai::save_csv(d, out_csv);
    std::cerr << "[synth] wrote " << d.size() << " rows to " << out_csv << "\n";
  }
  if (!out_schema.empty()) {
    schema.save(out_schema);
    std::cerr << "[synth] wrote schema to " << out_schema << "\n";
  }
  return 0;
}

int cmd_prepare(const std::string& dataset, std::string csv, std::string schema_path,
                const std::string& out_dir, size_t n_adversary, uint64_t seed,
                bool synthesize) {
  miai::DataSpec spec;
  spec.csv = csv;
  spec.schema_path = schema_path;
  spec.preprocess = dataset;
  spec.synthesize_if_missing = synthesize;
  miai::Dataset raw = miai::detail::load_or_synthesize(spec, std::cerr);
  miai::Dataset clean = miai::detail::apply_preprocess(dataset, raw);
  if (n_adversary == 0) n_adversary = clean.size() / 4;
  auto [ds_a, ds_t] = miai::split(clean, n_adversary, seed);

  fs::create_directories(out_dir);
  clean.schema.save(out_dir + "/schema.json");
  miai::save_csv(ds_a, out_dir + "/ds_a.csv");
  miai::save_csv(ds_t, out_dir + "/ds_t.csv");
  nlohmann::json meta;
  meta["dataset"] = dataset;
  meta["raw_records"] = raw.size();
  meta["preprocessed_records"] = clean.size();
  meta["n_adversary"] = ds_a.size();
  meta["n_target"] = ds_t.size();
  meta["split_seed"] = seed;
  std::ofstream out(out_dir + "/meta.json");
  out << meta.dump(2) << "\n";
  std::cerr << "[prepare] " << clean.size() << " records -> DS_A " << ds_a.size()
            << ", DS_T " << ds_t.size() << " under " << out_dir << "\n";
  return 0;
}

int cmd_train(const std::string& family, const std::string& train_csv,
              const std::string& schema_path, const std::string& out_path,
              const miai::TreeParams& tp, const miai::NetParams& np) {
  miai::Schema schema = miai::Schema::load(schema_path);
  miai::Dataset train = miai::load_csv(train_csv, schema);
  train.provenance = miai::Provenance::training;
  miai::TargetModel model;
  if (family == "decision-tree" || family == "dt") {
    model = miai::train_decision_tree(train, tp);
  } else if (family == "neural-net" || family == "nn") {
    model = miai::train_neural_net(train, np);
  } else {
    miai::fail("unknown model family '", family, "'");
  }
  model.save(out_path);
  miai::ConfusionMatrix cm = miai::confusion_matrix(model, train);
  int64_t diag = 0;
  for (size_t i = 0; i < cm.labels.size(); ++i) diag += cm.counts[i][i];
  std::cerr << "[train] " << family << " on " << train.size() << " records, training accuracy "
            << miai::format_pct(static_cast<double>(diag) / static_cast<double>(cm.total()))
            << ", saved to " << out_path << "\n";
  return 0;
}

int cmd_serve(const std::string& model_path, const std::string& bind, bool expose_scores) {
  miai::TargetModel model = miai::TargetModel::load(model_path);
  if (model.schema_doc.is_null())
    miai::fail("model file carries no schema document; retrain with this toolkit");
  auto [host, port] = parse_bind(bind);
  miai::OracleServer server(model, model.schema_doc, expose_scores);
  std::cerr << "[serve] " << model_path << " on " << host << ":" << port << "\n";
  server.listen(host, port);
  return 0;
}

int cmd_evaluate(const std::string& predictions_path, const std::string& dataset_path,
                 const std::string& schema_path, const std::string& positive,
                 const std::string& group_by, const std::string& out_json,
                 const std::string& out_csv) {
  miai::Schema schema = miai::Schema::load(schema_path);
  miai::Dataset truth = miai::load_csv(dataset_path, schema);
  std::vector<miai::AttackPrediction> preds = miai::load_predictions_csv(predictions_path);
  std::string pos = positive.empty() ? schema.sensitive().domain[0] : positive;
  miai::EvaluationReport rep = miai::score(preds, truth, pos);
  for (auto& [name, sub] : miai::per_case_breakdown(preds, truth, pos))
    rep.slices[name] = std::move(sub);
  for (auto& [name, sub] : miai::per_class_breakdown(preds, truth, pos))
    rep.slices[name] = std::move(sub);
  if (group_by == "education") {
    auto grouped = miai::group_analysis(preds, truth, pos, miai::education_grouping());
    for (auto& [name, sub] : grouped.slices) rep.slices[name] = std::move(sub);
  }
  if (!out_json.empty()) {
    std::ofstream out(out_json);
    out << rep.to_json().dump(2) << "\n";
  }
  if (!out_csv.empty()) miai::save_report_csv(rep, out_csv);
  std::cout << "TP " << rep.counts.tp << "  TN " << rep.counts.tn << "  FP " << rep.counts.fp
            << "  FN " << rep.counts.fn << "\n"
            << "precision " << miai::format_pct(rep.precision) << "  recall "
            << miai::format_pct(rep.recall) << "  accuracy " << miai::format_pct(rep.accuracy)
            << "  F1 " << miai::format_pct(rep.f1) << "  G-mean "
            << miai::format_pct(rep.g_mean) << "  MCC " << miai::format_pct(rep.mcc) << "\n";
  return 0;
}

int cmd_report(const std::vector<std::string>& inputs, const std::string& out_csv) {
  std::vector<miai::ComparisonRow> rows;
  for (const auto& path : inputs) {
    std::ifstream in(path);
    if (!in) miai::fail("cannot open report '", path, "'");
    nlohmann::json doc;
    in >> doc;
    miai::BinaryCounts c;
    c.tp = doc.at("tp").get<int64_t>();
    c.tn = doc.at("tn").get<int64_t>();
    c.fp = doc.at("fp").get<int64_t>();
    c.fn = doc.at("fn").get<int64_t>();
    miai::ComparisonRow row;
    row.attack = doc.value("attack", path);
    row.report = miai::metrics_from_counts(c, doc.value("positive", ""));
    row.ledger_queries = doc.value("queries", uint64_t{0});
    rows.push_back(std::move(row));
  }
  if (!out_csv.empty()) miai::save_comparison_csv(rows, out_csv);
  std::cout << miai::comparison_table_text(rows);
  return 0;
}

int cmd_importance(const std::string& model_path) {
  miai::TargetModel model = miai::TargetModel::load(model_path);
  auto imp = miai::importance(model);
  std::vector<std::pair<std::string, double>> sorted(imp.begin(), imp.end());
  std::sort(sorted.begin(), sorted.end(),
            [](const auto& a, const auto& b) { return a.second > b.second; });
  for (const auto& [name, v] : sorted)
    std::cout << name << "," << miai::format_pct(v) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"model-inversion attribute-inference toolkit"};
  app.require_subcommand(1);

  // synth-data
  std::string sd_dataset, sd_out, sd_schema;
  uint64_t sd_seed = 0;
  double sd_scale = 1.0;
  auto* synth = app.add_subcommand("synth-data", "generate the seeded stand-in datasets");
  synth->add_option("--dataset", sd_dataset, "gss | adult")->required();
  synth->add_option("--out", sd_out, "output CSV path");
  synth->add_option("--schema-out", sd_schema, "output schema JSON path");
  synth->add_option("--seed", sd_seed, "generator seed (0 = built-in default)");
  synth->add_option("--scale", sd_scale, "shrink factor for desk-size samples");

  // prepare-data
  std::string pd_dataset, pd_csv, pd_schema, pd_out = "prepared";
  size_t pd_na = 0;
  uint64_t pd_seed = 41;
  bool pd_synth = true;
  auto* prep = app.add_subcommand("prepare-data",
                                  "load/synthesize, preprocess, and split a dataset");
  prep->add_option("--dataset", pd_dataset, "gss | adult | none")->required();
  prep->add_option("--csv", pd_csv, "raw export CSV (synthesized when absent)");
  prep->add_option("--schema", pd_schema, "schema JSON (built-in when omitted)");
  prep->add_option("--out-dir", pd_out, "output directory");
  prep->add_option("--n-adversary", pd_na, "records in DS_A (default: 25%)");
  prep->add_option("--seed", pd_seed, "split seed");
  prep->add_flag("--no-synthesize{false}", pd_synth, "fail when the CSV is absent");

  // train-target
  std::string tt_family = "decision-tree", tt_csv, tt_schema, tt_out = "model.json";
  miai::TreeParams tt_tree;
  miai::NetParams tt_net;
  auto* train = app.add_subcommand("train-target", "train a target model on a dataset");
  train->add_option("--family", tt_family, "decision-tree | neural-net");
  train->add_option("--train", tt_csv, "training CSV (DS_T)")->required();
  train->add_option("--schema", tt_schema, "schema JSON")->required();
  train->add_option("--out", tt_out, "model output path");
  train->add_option("--max-depth", tt_tree.max_depth, "tree: maximum depth");
  train->add_option("--min-leaf", tt_tree.min_leaf_count, "tree: minimum leaf count");
  train->add_option("--epochs", tt_net.epochs, "net: epochs");
  train->add_option("--batch", tt_net.batch, "net: batch size");
  train->add_option("--learning-rate", tt_net.learning_rate, "net: learning rate");
  train->add_option("--momentum", tt_net.momentum, "net: momentum");
  train->add_option("--hidden", tt_net.hidden, "net: hidden layer sizes");
  train->add_option("--seed", tt_net.seed, "net: init/shuffle seed");

  // serve
  std::string sv_model, sv_bind = "127.0.0.1:8080";
  bool sv_scores = false;
  auto* serve = app.add_subcommand("serve", "publish a model as a prediction API");
  serve->add_option("--model", sv_model, "model JSON path")->required();
  serve->add_option("--bind", sv_bind, "host:port");
  serve->add_flag("--expose-scores", sv_scores, "include full score vectors");

  // attack
  std::string at_config;
  auto* attack = app.add_subcommand("attack", "run one attack from a JSON config");
  attack->add_option("--config", at_config, "attack run config JSON")->required();

  // evaluate
  std::string ev_preds, ev_dataset, ev_schema, ev_positive, ev_group, ev_json, ev_csv;
  auto* eval = app.add_subcommand("evaluate", "score predictions against ground truth");
  eval->add_option("--predictions", ev_preds, "predictions CSV")->required();
  eval->add_option("--dataset", ev_dataset, "ground-truth CSV")->required();
  eval->add_option("--schema", ev_schema, "schema JSON")->required();
  eval->add_option("--positive", ev_positive, "positive sensitive value");
  eval->add_option("--group-by", ev_group, "named grouping (education)");
  eval->add_option("--out-json", ev_json, "report JSON path");
  eval->add_option("--out-csv", ev_csv, "report CSV path");

  // report
  std::vector<std::string> rp_inputs;
  std::string rp_out;
  auto* report = app.add_subcommand("report", "assemble a comparison table from reports");
  report->add_option("--in", rp_inputs, "per-attack report JSON files")->required();
  report->add_option("--out", rp_out, "comparison CSV path");

  // importance
  std::string im_model;
  auto* imp = app.add_subcommand("importance", "attribute importance of a tree model");
  imp->add_option("--model", im_model, "model JSON path")->required();

  // run
  std::string rn_preset, rn_config, rn_data_dir, rn_report_dir;
  uint64_t rn_seed = 0;
  int rn_workers = -1;
  auto* run = app.add_subcommand("run", "run a full experiment (preset or config)");
  run->add_option("--preset", rn_preset,
                  "gss-dt | gss-nn | adult-dt | adult-nn | adult-partial");
  run->add_option("--config", rn_config, "experiment config JSON");
  run->add_option("--data-dir", rn_data_dir, "dataset directory (env MIAI_DATA_DIR)");
  run->add_option("--report-dir", rn_report_dir, "output directory override");
  run->add_option("--seed", rn_seed, "override every seed in the config");
  run->add_option("--workers", rn_workers, "attack worker threads");

  CLI11_PARSE(app, argc, argv);

  try {
    if (synth->parsed())
      return cmd_synth_data(sd_dataset, sd_out, sd_schema, sd_seed, sd_scale);
    if (prep->parsed())
      return cmd_prepare(pd_dataset, pd_csv, pd_schema, pd_out, pd_na, pd_seed, pd_synth);
    if (train->parsed())
      return cmd_train(tt_family, tt_csv, tt_schema, tt_out, tt_tree, tt_net);
    if (serve->parsed()) return cmd_serve(sv_model, sv_bind, sv_scores);
    if (attack->parsed()) {
      miai::run_attack_config(miai::AttackRunConfig::load(at_config));
      return 0;
    }
    if (eval->parsed())
      return cmd_evaluate(ev_preds, ev_dataset, ev_schema, ev_positive, ev_group, ev_json,
                          ev_csv);
    if (report->parsed()) return cmd_report(rp_inputs, rp_out);
    if (imp->parsed()) return cmd_importance(im_model);
    if (run->parsed()) {
      miai::ExperimentConfig config;
      if (!rn_preset.empty()) {
        std::string dir = rn_data_dir.empty() ? default_data_dir() : rn_data_dir;
        config = miai::preset(rn_preset, dir);
      } else if (!rn_config.empty()) {
        config = miai::ExperimentConfig::load(rn_config);
      } else {
        miai::fail("run needs --preset or --config");
      }
      if (rn_seed) config.seed_override = rn_seed;
      if (!rn_report_dir.empty()) config.report_dir = rn_report_dir;
      if (rn_workers >= 0) config.workers = rn_workers;
      miai::run_experiment(config);
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
