#include "decnas/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace decnas {

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  auto e = s.find_last_not_of(" \t\r");
  return b == std::string::npos ? "" : s.substr(b, e - b + 1);
}

bool parse_bool(const std::string& v, int line) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError("line " + std::to_string(line) + ": expected boolean, got '" + v + "'");
}

template <typename T>
T parse_num(const std::string& v, int line) {
  std::istringstream in(v);
  T out;
  std::string rest;
  if (!(in >> out) || (in >> rest))
    throw ConfigError("line " + std::to_string(line) + ": bad number '" + v + "'");
  return out;
}

}  // namespace

RoundSchedule parse_round_schedule(const std::string& text) {
  RoundSchedule sched;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    auto colon = item.find(':');
    auto dash = item.find('-');
    if (colon == std::string::npos || dash == std::string::npos || dash > colon)
      throw ConfigError("bad round schedule entry '" + item + "' (want first-last:rounds)");
    RoundSchedule::Tier tier;
    tier.first_iter = std::stoi(item.substr(0, dash));
    std::string last = trim(item.substr(dash + 1, colon - dash - 1));
    tier.last_iter = last.empty() ? -1 : std::stoi(last);
    tier.rounds = std::stoi(item.substr(colon + 1));
    if (tier.rounds < 1) throw ConfigError("round count must be >= 1 in '" + item + "'");
    if (tier.first_iter < 1 ||
        (tier.last_iter >= 0 && tier.last_iter < tier.first_iter))
      throw ConfigError("bad iteration range in '" + item + "'");
    sched.tiers.push_back(tier);
  }
  if (sched.tiers.empty()) throw ConfigError("empty round schedule");
  return sched;
}

RunConfig parse_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);

  RunConfig cfg;
  using Setter = std::function<void(RunConfig&, const std::string&, int)>;
  const std::map<std::string, Setter> schema = {
      {"run.seed", [](RunConfig& c, const std::string& v, int l) { c.seed = parse_num<std::uint64_t>(v, l); }},
      {"run.output_dir", [](RunConfig& c, const std::string& v, int) { c.output_dir = v; }},
      {"data.dataset", [](RunConfig& c, const std::string& v, int) { c.dataset = v; }},
      {"data.num_clients", [](RunConfig& c, const std::string& v, int l) { c.num_clients = parse_num<int>(v, l); }},
      {"data.shard_mode", [](RunConfig& c, const std::string& v, int l) {
         if (v != "iid" && v != "label_skew")
           throw ConfigError("line " + std::to_string(l) + ": shard_mode must be iid or label_skew");
         c.shard_mode = v;
       }},
      {"data.classes_per_client", [](RunConfig& c, const std::string& v, int l) { c.classes_per_client = parse_num<int>(v, l); }},
      {"data.class_count", [](RunConfig& c, const std::string& v, int l) { c.class_count = parse_num<int>(v, l); }},
      {"data.sample_count", [](RunConfig& c, const std::string& v, int l) { c.sample_count = parse_num<int>(v, l); }},
      {"data.noise", [](RunConfig& c, const std::string& v, int l) { c.noise = parse_num<double>(v, l); }},
      {"model.template", [](RunConfig& c, const std::string& v, int) { c.model_template = v; }},
      {"model.pretrain_rounds", [](RunConfig& c, const std::string& v, int l) { c.pretrain_rounds = parse_num<int>(v, l); }},
      {"search.group_count", [](RunConfig& c, const std::string& v, int l) { c.group_count = parse_num<int>(v, l); }},
      {"search.balance_r", [](RunConfig& c, const std::string& v, int l) { c.balance_r = parse_num<double>(v, l); }},
      {"search.epochs", [](RunConfig& c, const std::string& v, int l) { c.epochs = parse_num<int>(v, l); }},
      {"search.drop_alpha", [](RunConfig& c, const std::string& v, int l) { c.drop_alpha = parse_num<double>(v, l); }},
      {"search.lr", [](RunConfig& c, const std::string& v, int l) { c.lr = parse_num<double>(v, l); }},
      {"search.batch_size", [](RunConfig& c, const std::string& v, int l) { c.batch_size = parse_num<int>(v, l); }},
      {"search.delta_percent", [](RunConfig& c, const std::string& v, int l) { c.delta_percent = parse_num<double>(v, l); }},
      {"search.decay", [](RunConfig& c, const std::string& v, int l) { c.decay = parse_num<double>(v, l); }},
      {"search.final_budget_percent", [](RunConfig& c, const std::string& v, int l) { c.final_budget_percent = parse_num<double>(v, l); }},
      {"search.round_schedule", [](RunConfig& c, const std::string& v, int) { c.round_schedule = v; }},
      {"search.grouping_enabled", [](RunConfig& c, const std::string& v, int l) { c.grouping_enabled = parse_bool(v, l); }},
      {"search.dynamic_rounds_enabled", [](RunConfig& c, const std::string& v, int l) { c.dynamic_rounds_enabled = parse_bool(v, l); }},
      {"search.early_drop_enabled", [](RunConfig& c, const std::string& v, int l) { c.early_drop_enabled = parse_bool(v, l); }},
      {"search.oracle_mode", [](RunConfig& c, const std::string& v, int l) { c.oracle_mode = parse_bool(v, l); }},
      {"search.fl_tune_all", [](RunConfig& c, const std::string& v, int l) { c.fl_tune_all = parse_bool(v, l); }},
      {"fl_tune.rounds", [](RunConfig& c, const std::string& v, int l) { c.fl_rounds = parse_num<int>(v, l); }},
      {"fl_tune.clients_per_round", [](RunConfig& c, const std::string& v, int l) { c.clients_per_round = parse_num<int>(v, l); }},
      {"cost.seconds_per_mac", [](RunConfig& c, const std::string& v, int l) { c.seconds_per_mac = parse_num<double>(v, l); }},
  };

  std::string line;
  std::string section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#' || t[0] == ';') continue;
    if (t.front() == '[' && t.back() == ']') {
      section = trim(t.substr(1, t.size() - 2));
      continue;
    }
    auto eq = t.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    std::string key = trim(t.substr(0, eq));
    std::string value = trim(t.substr(eq + 1));
    std::string full = section.empty() ? key : section + "." + key;
    auto it = schema.find(full);
    if (it == schema.end())
      throw ConfigError("line " + std::to_string(lineno) + ": unknown key '" + full + "'");
    it->second(cfg, value, lineno);
  }

  // cross-field checks
  parse_round_schedule(cfg.round_schedule);
  if (cfg.num_clients < 1) throw ConfigError("num_clients must be >= 1");
  if (cfg.group_count < 1) throw ConfigError("group_count must be >= 1");
  if (cfg.drop_alpha < 0 || cfg.drop_alpha > 100)
    throw ConfigError("drop_alpha must be in [0, 100]");
  if (cfg.epochs < 1) throw ConfigError("epochs must be >= 1");
  if (cfg.shard_mode == "label_skew" &&
      (cfg.classes_per_client < 1 || cfg.classes_per_client > cfg.class_count))
    throw ConfigError("classes_per_client must be in [1, class_count]");
  return cfg;
}

void write_frontier_csv(std::vector<FrontierRow> rows, const std::string& path) {
  std::stable_sort(rows.begin(), rows.end(),
                   [](const FrontierRow& a, const FrontierRow& b) {
                     return a.macs > b.macs;
                   });
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path);
  out << "method,iteration,macs,macs_ratio,top1_accuracy\n";
  char buf[64];
  for (const auto& r : rows) {
    out << r.method << ',' << r.iteration << ',' << r.macs << ',';
    std::snprintf(buf, sizeof buf, "%.6f", r.macs_ratio);
    out << buf << ',';
    std::snprintf(buf, sizeof buf, "%.6f", r.top1_accuracy);
    out << buf << '\n';
  }
}

std::vector<FrontierRow> read_frontier_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path);
  std::string line;
  if (!std::getline(in, line) ||
      line != "method,iteration,macs,macs_ratio,top1_accuracy")
    throw ConfigError("bad frontier header in " + path);
  std::vector<FrontierRow> rows;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    std::stringstream ss(line);
    FrontierRow r;
    std::string field;
    std::getline(ss, r.method, ',');
    std::getline(ss, field, ',');
    r.iteration = std::stoi(field);
    std::getline(ss, field, ',');
    r.macs = std::stoll(field);
    std::getline(ss, field, ',');
    r.macs_ratio = std::stod(field);
    std::getline(ss, field, ',');
    r.top1_accuracy = std::stod(field);
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace decnas
