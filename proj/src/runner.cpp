#include "decnas/runner.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "decnas/model_io.hpp"
#include "decnas/models.hpp"
#include "decnas/util.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace decnas {

namespace {

std::uint64_t fnv1a(const std::string& data, std::uint64_t h = 0xcbf29ce484222325ULL) {
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

ordered_json config_to_json(const RunConfig& c) {
  ordered_json j;
  j["run"] = {{"seed", c.seed}, {"output_dir", c.output_dir}};
  j["data"] = {{"dataset", c.dataset},
               {"num_clients", c.num_clients},
               {"shard_mode", c.shard_mode},
               {"classes_per_client", c.classes_per_client},
               {"class_count", c.class_count},
               {"sample_count", c.sample_count},
               {"noise", c.noise}};
  j["model"] = {{"template", c.model_template},
                {"pretrain_rounds", c.pretrain_rounds}};
  j["search"] = {{"group_count", c.group_count},
                 {"balance_r", c.balance_r},
                 {"epochs", c.epochs},
                 {"drop_alpha", c.drop_alpha},
                 {"lr", c.lr},
                 {"batch_size", c.batch_size},
                 {"delta_percent", c.delta_percent},
                 {"decay", c.decay},
                 {"final_budget_percent", c.final_budget_percent},
                 {"round_schedule", c.round_schedule},
                 {"grouping_enabled", c.grouping_enabled},
                 {"dynamic_rounds_enabled", c.dynamic_rounds_enabled},
                 {"early_drop_enabled", c.early_drop_enabled},
                 {"oracle_mode", c.oracle_mode},
                 {"fl_tune_all", c.fl_tune_all}};
  j["fl_tune"] = {{"rounds", c.fl_rounds},
                  {"clients_per_round", c.clients_per_round}};
  j["cost"] = {{"seconds_per_mac", c.seconds_per_mac}};
  return j;
}

}  // namespace

Batch pooled_test_set(const Federation& fed) {
  std::vector<Sample> pool;
  for (const auto& c : fed.clients)
    pool.insert(pool.end(), c.test.begin(), c.test.end());
  if (pool.empty()) throw DataError("empty pooled test set");
  Batch b;
  const auto& shp = pool[0].features.shape;
  b.features = Tensor({pool.size(), shp[0], shp[1], shp[2]});
  b.labels.resize(pool.size());
  const std::size_t stride = pool[0].features.size();
  for (std::size_t i = 0; i < pool.size(); ++i) {
    std::copy(pool[i].features.values.begin(), pool[i].features.values.end(),
              b.features.values.begin() + i * stride);
    b.labels[i] = pool[i].label;
  }
  return b;
}

SearchConfig make_search_config(const RunConfig& cfg, std::int64_t gm0_macs,
                                int threads) {
  SearchConfig sc;
  sc.seed = cfg.seed;
  sc.group_count = cfg.oracle_mode ? 1 : cfg.group_count;
  sc.balance_r = cfg.balance_r;
  sc.epochs = cfg.epochs;
  sc.drop_alpha = cfg.drop_alpha;
  sc.round_schedule = parse_round_schedule(cfg.round_schedule);
  sc.lr = static_cast<float>(cfg.lr);
  sc.batch_size = cfg.batch_size;
  sc.delta_0 = cfg.delta_percent / 100.0 * double(gm0_macs);
  sc.decay = cfg.decay;
  sc.final_budget = cfg.final_budget_percent / 100.0 * double(gm0_macs);
  sc.grouping_enabled = cfg.grouping_enabled;
  sc.dynamic_rounds_enabled = cfg.dynamic_rounds_enabled;
  sc.early_drop_enabled = cfg.early_drop_enabled;
  sc.threads = threads;
  return sc;
}

RunContext prepare_run(RunConfig cfg, int threads) {
  RunContext ctx;
  ctx.threads = std::max(1, threads);

  ctx.gm0_arch = make_template(cfg.model_template, cfg.class_count);

  std::vector<Sample> samples;
  if (cfg.dataset == "synthetic") {
    samples = load_synthetic(cfg.seed, cfg.class_count, cfg.sample_count,
                             ctx.gm0_arch.input, static_cast<float>(cfg.noise));
  } else {
    samples = load_image_directory(cfg.dataset, ctx.gm0_arch.input);
  }
  ShardMode mode = cfg.shard_mode == "iid"
                       ? ShardMode::Iid()
                       : ShardMode::LabelSkew(cfg.classes_per_client);
  ctx.fed = shard_clients(samples, cfg.num_clients, mode, cfg.class_count,
                          cfg.seed);

  ctx.gm0_params =
      init_parameters(ctx.gm0_arch, seed_combine(cfg.seed, 0x171ULL));
  if (cfg.pretrain_rounds > 0) {
    ctx.gm0_params = fl_tune(ctx.gm0_arch, ctx.gm0_params, ctx.fed,
                             cfg.pretrain_rounds, cfg.clients_per_round,
                             cfg.epochs, static_cast<float>(cfg.lr),
                             cfg.batch_size, seed_combine(cfg.seed, 0x93eULL),
                             ctx.threads);
  }
  ctx.global_test = pooled_test_set(ctx.fed);
  ctx.cfg = std::move(cfg);
  return ctx;
}

void execute_search(const RunContext& ctx) {
  const RunConfig& cfg = ctx.cfg;
  fs::create_directories(cfg.output_dir);
  fs::create_directories(fs::path(cfg.output_dir) / "models");

  const std::int64_t gm0_macs = macs(ctx.gm0_arch);
  SearchConfig sc = make_search_config(cfg, gm0_macs, ctx.threads);
  SearchResult result = run_search(sc, ctx.fed, ctx.gm0_arch, ctx.gm0_params);

  const std::string method = cfg.oracle_mode ? "oracle" : "decnas";
  std::vector<FrontierRow> rows;
  CostLedger tune_ledger;

  auto tuned_row = [&](const Architecture& arch, const Parameters& params,
                       int iteration, std::uint64_t tag) {
    Parameters tuned =
        fl_tune(arch, params, ctx.fed, cfg.fl_rounds, cfg.clients_per_round,
                cfg.epochs, static_cast<float>(cfg.lr), cfg.batch_size,
                seed_combine(cfg.seed, 0xf7eULL, tag), ctx.threads, &tune_ledger);
    auto eval = evaluate(arch, tuned, ctx.global_test);
    FrontierRow row{method, iteration, macs(arch),
                    double(macs(arch)) / double(gm0_macs), eval.accuracy};
    return std::make_pair(row, std::move(tuned));
  };

  // unpruned reference
  auto [row0, tuned0] = tuned_row(ctx.gm0_arch, ctx.gm0_params, 0, 0);
  rows.push_back(row0);
  save_model((fs::path(cfg.output_dir) / "models" / "gm_000.json").string(),
             ctx.gm0_arch, tuned0);

  for (std::size_t i = 0; i < result.gms.size(); ++i) {
    const bool last = i + 1 == result.gms.size();
    const auto& gm = result.gms[i];
    char name[32];
    std::snprintf(name, sizeof name, "gm_%03zu.json", i + 1);
    if (cfg.fl_tune_all || last) {
      auto [row, tuned] =
          tuned_row(gm.arch, gm.params, static_cast<int>(i + 1), i + 1);
      rows.push_back(row);
      save_model((fs::path(cfg.output_dir) / "models" / name).string(), gm.arch,
                 tuned);
    } else {
      save_model((fs::path(cfg.output_dir) / "models" / name).string(), gm.arch,
                 gm.params);
    }
  }

  const std::string frontier_path =
      (fs::path(cfg.output_dir) / "frontier.csv").string();
  write_frontier_csv(rows, frontier_path);

  CostLedger all = result.ledger;
  all.append(tune_ledger);
  const std::string costs_path = (fs::path(cfg.output_dir) / "costs.csv").string();
  write_ledger_csv(all.entries, costs_path);

  ordered_json run_json;
  run_json["config"] = config_to_json(cfg);
  run_json["seed"] = cfg.seed;
  run_json["method"] = method;
  run_json["gm0_macs"] = gm0_macs;
  run_json["iterations"] = ordered_json::array();
  for (const auto& rep : result.reports) {
    ordered_json ij;
    ij["iteration"] = rep.iteration;
    ij["budget"] = rep.budget;
    ij["chosen_layer_index"] = rep.chosen_layer_index;
    ij["chosen_candidate_id"] = rep.chosen_candidate_id;
    ij["fused_accuracy"] = rep.fused_accuracy;
    ij["macs"] = rep.macs;
    ij["rounds"] = rep.rounds;
    ij["candidate_count"] = rep.candidate_count;
    ij["drops"] = ordered_json::array();
    for (auto [round, cand] : rep.drop_log)
      ij["drops"].push_back({{"round", round}, {"candidate_id", cand}});
    run_json["iterations"].push_back(std::move(ij));
  }
  auto summary = summarize(all.entries, cfg.seconds_per_mac);
  run_json["cost_summary"] = {
      {"total_uplink_bytes", summary.total_uplink_bytes},
      {"total_downlink_bytes", summary.total_downlink_bytes},
      {"total_compute_macs", summary.total_compute_macs},
      {"distinct_clients", summary.distinct_clients},
      {"avg_uplink_bytes_per_client", summary.avg_uplink_bytes_per_client},
      {"total_compute_seconds", summary.total_compute_seconds}};
  std::uint64_t hash = fnv1a(read_file(costs_path), fnv1a(read_file(frontier_path)));
  char hex[32];
  std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(hash));
  run_json["output_hash"] = hex;

  std::ofstream out(fs::path(cfg.output_dir) / "run.json", std::ios::binary);
  out << run_json.dump(2) << '\n';
  std::cout << "wrote " << frontier_path << " (" << rows.size() << " rows), "
            << costs_path << " (" << all.entries.size() << " entries)\n";
}

void execute_baseline(const RunContext& ctx, const std::vector<double>& factors) {
  const RunConfig& cfg = ctx.cfg;
  fs::create_directories(cfg.output_dir);
  const std::string frontier_path =
      (fs::path(cfg.output_dir) / "frontier.csv").string();
  std::vector<FrontierRow> rows;
  if (fs::exists(frontier_path)) rows = read_frontier_csv(frontier_path);

  const std::int64_t gm0_macs = macs(ctx.gm0_arch);
  for (std::size_t i = 0; i < factors.size(); ++i) {
    Architecture arch = width_multiplier(ctx.gm0_arch, factors[i]);
    Parameters params = init_parameters(
        arch, seed_combine(cfg.seed, 0x3a5eULL, std::uint64_t(i)));
    params = fl_tune(arch, params, ctx.fed, cfg.fl_rounds, cfg.clients_per_round,
                     cfg.epochs, static_cast<float>(cfg.lr), cfg.batch_size,
                     seed_combine(cfg.seed, 0x3a5fULL, std::uint64_t(i)),
                     ctx.threads);
    auto eval = evaluate(arch, params, ctx.global_test);
    rows.push_back({"width_multiplier", static_cast<int>(i), macs(arch),
                    double(macs(arch)) / double(gm0_macs), eval.accuracy});
    std::cout << "width_multiplier " << fmt(factors[i]) << ": macs "
              << macs(arch) << ", top1 " << fmt(eval.accuracy) << "\n";
  }
  write_frontier_csv(rows, frontier_path);
}

void execute_fl_tune(const RunContext& ctx, const std::string& model_path) {
  const RunConfig& cfg = ctx.cfg;
  fs::create_directories(cfg.output_dir);
  Architecture arch = ctx.gm0_arch;
  Parameters params = ctx.gm0_params;
  if (!model_path.empty()) std::tie(arch, params) = load_model(model_path);
  params = fl_tune(arch, params, ctx.fed, cfg.fl_rounds, cfg.clients_per_round,
                   cfg.epochs, static_cast<float>(cfg.lr), cfg.batch_size,
                   seed_combine(cfg.seed, 0xf7eULL), ctx.threads);
  auto eval = evaluate(arch, params, ctx.global_test);
  const std::string out_path =
      (fs::path(cfg.output_dir) / "fl_tuned_model.json").string();
  save_model(out_path, arch, params);
  std::cout << "fl-tune: " << cfg.fl_rounds << " rounds, top1 "
            << fmt(eval.accuracy) << ", model written to " << out_path << "\n";
}

void execute_report(const std::string& run_dir) {
  const std::string frontier_path = (fs::path(run_dir) / "frontier.csv").string();
  if (!fs::exists(frontier_path))
    throw ConfigError("missing artifact: " + frontier_path);
  auto rows = read_frontier_csv(frontier_path);
  if (rows.empty()) {
    std::cout << "no rows\n";
    return;
  }

  std::cout << "method             iter      macs  macs_ratio  top1\n";
  for (const auto& r : rows) {
    std::printf("%-18s %4d %9lld    %.4f    %.4f\n", r.method.c_str(),
                r.iteration, static_cast<long long>(r.macs), r.macs_ratio,
                r.top1_accuracy);
  }

  const std::string costs_path = (fs::path(run_dir) / "costs.csv").string();
  if (fs::exists(costs_path)) {
    std::ifstream in(costs_path);
    std::string line;
    std::getline(in, line);  // header
    std::int64_t up = 0, down = 0, mac = 0;
    while (std::getline(in, line)) {
      std::stringstream ss(line);
      std::string f;
      for (int i = 0; i < 4; ++i) std::getline(ss, f, ',');
      std::getline(ss, f, ',');
      up += std::stoll(f);
      std::getline(ss, f, ',');
      down += std::stoll(f);
      std::getline(ss, f, ',');
      mac += std::stoll(f);
    }
    std::cout << "totals: uplink " << up << " B, downlink " << down
              << " B, compute " << mac << " MACs\n";
  }

  // accuracy vs macs_ratio, one polyline per method
  std::map<std::string, std::vector<const FrontierRow*>> by_method;
  for (const auto& r : rows) by_method[r.method].push_back(&r);
  const int width = 640, height = 480, margin = 50;
  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
      << "\" height=\"" << height << "\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<line x1=\"" << margin << "\" y1=\"" << height - margin << "\" x2=\""
      << width - margin << "\" y2=\"" << height - margin
      << "\" stroke=\"black\"/>\n";
  svg << "<line x1=\"" << margin << "\" y1=\"" << margin << "\" x2=\"" << margin
      << "\" y2=\"" << height - margin << "\" stroke=\"black\"/>\n";
  svg << "<text x=\"" << width / 2 << "\" y=\"" << height - 10
      << "\" font-size=\"12\">macs_ratio</text>\n";
  svg << "<text x=\"12\" y=\"" << height / 2
      << "\" font-size=\"12\" transform=\"rotate(-90 12 " << height / 2
      << ")\">top1_accuracy</text>\n";
  const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd"};
  int ci = 0;
  int legend_y = margin;
  for (auto& [name, pts] : by_method) {
    std::sort(pts.begin(), pts.end(), [](const auto* a, const auto* b) {
      return a->macs_ratio < b->macs_ratio;
    });
    const char* color = colors[ci++ % 4];
    svg << "<polyline fill=\"none\" stroke=\"" << color << "\" points=\"";
    for (const auto* p : pts) {
      double x = margin + p->macs_ratio * (width - 2 * margin);
      double y = height - margin - p->top1_accuracy * (height - 2 * margin);
      svg << fmt(x) << ',' << fmt(y) << ' ';
    }
    svg << "\"/>\n";
    svg << "<text x=\"" << width - margin - 120 << "\" y=\"" << legend_y
        << "\" font-size=\"12\" fill=\"" << color << "\">" << name
        << "</text>\n";
    legend_y += 16;
  }
  svg << "</svg>\n";
  std::ofstream out(fs::path(run_dir) / "frontier.svg", std::ios::binary);
  out << svg.str();
  std::cout << "wrote " << (fs::path(run_dir) / "frontier.svg").string() << "\n";
}

}  // namespace decnas
