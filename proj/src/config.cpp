#include "exchlab/config.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace exchlab::cli {

namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& where, const std::string& what) {
  throw ConfigError(where + ": " + what);
}

void check_keys(const json& obj, const std::string& where,
                std::initializer_list<const char*> allowed) {
  for (const auto& [key, _] : obj.items()) {
    if (std::find_if(allowed.begin(), allowed.end(), [&](const char* a) {
          return key == a;
        }) == allowed.end()) {
      bad(where, "unknown key '" + key + "'");
    }
  }
}

double get_number(const json& obj, const std::string& where, const char* key) {
  if (!obj.contains(key)) bad(where + "." + key, "missing");
  if (!obj[key].is_number()) bad(where + "." + key, "must be a number");
  return obj[key].get<double>();
}

MagnitudeRule parse_magnitudes(const json& v, const std::string& where) {
  MagnitudeRule rule;
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (s == "unit") {
      rule.kind = MagnitudeRule::Kind::unit;
    } else if (s == "halfnormal_draws") {
      rule.kind = MagnitudeRule::Kind::halfnormal_draws;
    } else if (s == "uniform_draws") {
      rule.kind = MagnitudeRule::Kind::uniform_draws;
    } else {
      bad(where, "unknown magnitude rule '" + s + "'");
    }
  } else if (v.is_array()) {
    rule.kind = MagnitudeRule::Kind::explicit_list;
    std::vector<double> raw;
    for (const auto& e : v) {
      if (!e.is_number()) bad(where, "entries must be numbers");
      raw.push_back(e.get<double>());
    }
    try {
      rule.values = normalize_magnitudes(raw);
    } catch (const std::invalid_argument& e) {
      bad(where, e.what());
    }
  } else {
    bad(where, "must be a rule name or an array of positive numbers");
  }
  return rule;
}

GeneratorSpec parse_generator(const json& g, const std::string& where) {
  if (!g.is_object()) bad(where, "must be an object");
  if (!g.contains("family") || !g["family"].is_string()) {
    bad(where + ".family", "missing or not a string");
  }
  const auto fam = family_from_name(g["family"].get<std::string>());
  if (!fam) bad(where + ".family", "unknown family '" +
                                       g["family"].get<std::string>() + "'");
  GeneratorSpec spec;
  spec.family = *fam;
  switch (*fam) {
    case Family::iid_symmetric: {
      check_keys(g, where, {"family", "dist"});
      if (g.contains("dist")) {
        if (!g["dist"].is_string()) bad(where + ".dist", "must be a string");
        const auto d = iid_dist_from_name(g["dist"].get<std::string>());
        if (!d) bad(where + ".dist",
                    "unknown distribution '" + g["dist"].get<std::string>() + "'");
        spec.dist = *d;
      }
      break;
    }
    case Family::rademacher_magnitude: {
      check_keys(g, where, {"family", "magnitudes"});
      spec.magnitudes.kind = MagnitudeRule::Kind::halfnormal_draws;
      if (g.contains("magnitudes")) {
        spec.magnitudes = parse_magnitudes(g["magnitudes"], where + ".magnitudes");
      }
      break;
    }
    case Family::zero_sum_permutation: {
      check_keys(g, where, {"family", "base"});
      spec.magnitudes.kind = MagnitudeRule::Kind::halfnormal_draws;
      if (g.contains("base")) {
        // half list: the positive member of each +/- pair
        MagnitudeRule rule = parse_magnitudes(g["base"], where + ".base");
        if (rule.kind == MagnitudeRule::Kind::explicit_list) {
          // pairing normalizes the full +/- multiset; keep the raw values
          rule.values.clear();
          for (const auto& e : g["base"]) rule.values.push_back(e.get<double>());
        }
        spec.magnitudes = rule;
      }
      break;
    }
    case Family::equicorrelated_gaussian: {
      check_keys(g, where, {"family", "rho", "rho_rule"});
      if (g.contains("rho") == g.contains("rho_rule")) {
        bad(where, "needs exactly one of 'rho' or 'rho_rule'");
      }
      if (g.contains("rho")) {
        spec.rho.vanishing = false;
        spec.rho.value = get_number(g, where, "rho");
      } else {
        const auto& r = g["rho_rule"];
        if (!r.is_object()) bad(where + ".rho_rule", "must be an object");
        check_keys(r, where + ".rho_rule", {"c"});
        spec.rho.vanishing = true;
        spec.rho.c = get_number(r, where + ".rho_rule", "c");
      }
      break;
    }
    case Family::scale_mixture: {
      check_keys(g, where, {"family", "delta", "delta_rule"});
      if (g.contains("delta") == g.contains("delta_rule")) {
        bad(where, "needs exactly one of 'delta' or 'delta_rule'");
      }
      if (g.contains("delta")) {
        spec.delta.vanishing = false;
        spec.delta.value = get_number(g, where, "delta");
      } else {
        const auto& r = g["delta_rule"];
        if (!r.is_object()) bad(where + ".delta_rule", "must be an object");
        check_keys(r, where + ".delta_rule", {"coeff", "exponent"});
        spec.delta.vanishing = true;
        spec.delta.coeff =
            r.contains("coeff") ? get_number(r, where + ".delta_rule", "coeff") : 1.0;
        spec.delta.exponent = r.contains("exponent")
                                  ? get_number(r, where + ".delta_rule", "exponent")
                                  : -0.25;
      }
      break;
    }
  }
  return spec;
}

engine::ExperimentSpec parse_experiment(const json& e, const std::string& where,
                                        std::uint64_t master_seed,
                                        unsigned threads) {
  if (!e.is_object()) bad(where, "must be an object");
  check_keys(e, where,
             {"name", "generator", "statistic", "gamma", "m_values", "n_rep",
              "epsilons", "write_samples", "write_reports"});
  engine::ExperimentSpec spec;
  spec.master_seed = master_seed;
  spec.threads = threads;

  if (!e.contains("name") || !e["name"].is_string()) {
    bad(where + ".name", "missing or not a string");
  }
  spec.name = e["name"].get<std::string>();
  if (spec.name.empty() ||
      spec.name.find_first_not_of("abcdefghijklmnopqrstuvwxyz"
                                  "ABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789_-") !=
          std::string::npos) {
    bad(where + ".name", "must be nonempty [A-Za-z0-9_-]");
  }

  if (!e.contains("generator")) bad(where + ".generator", "missing");
  spec.generator = parse_generator(e["generator"], where + ".generator");

  if (!e.contains("statistic")) bad(where + ".statistic", "missing");
  std::string stat_name;
  if (e["statistic"].is_string()) {
    stat_name = e["statistic"].get<std::string>();
  } else {
    bad(where + ".statistic", "must be 'full_sum' or 'weber'");
  }
  const auto kind = stat_kind_from_name(stat_name);
  if (!kind) bad(where + ".statistic", "unknown statistic '" + stat_name + "'");
  spec.statistic.kind = *kind;

  spec.schedule.gamma = 0.0;
  if (e.contains("gamma")) {
    if (!e["gamma"].is_number()) bad(where + ".gamma", "must be a number");
    spec.schedule.gamma = e["gamma"].get<double>();
  }
  spec.statistic.gamma = spec.schedule.gamma;

  if (!e.contains("m_values") || !e["m_values"].is_array()) {
    bad(where + ".m_values", "missing or not an array");
  }
  for (const auto& v : e["m_values"]) {
    if (!v.is_number_unsigned()) {
      bad(where + ".m_values", "entries must be positive integers");
    }
    spec.schedule.m_values.push_back(v.get<std::uint64_t>());
  }

  if (e.contains("n_rep")) {
    if (!e["n_rep"].is_number_unsigned()) {
      bad(where + ".n_rep", "must be a positive integer");
    }
    spec.n_rep = e["n_rep"].get<std::uint64_t>();
  }
  if (e.contains("epsilons")) {
    if (!e["epsilons"].is_array()) bad(where + ".epsilons", "must be an array");
    spec.epsilons.clear();
    for (const auto& v : e["epsilons"]) {
      if (!v.is_number()) bad(where + ".epsilons", "entries must be numbers");
      spec.epsilons.push_back(v.get<double>());
    }
  }
  if (e.contains("write_samples")) {
    if (!e["write_samples"].is_boolean()) {
      bad(where + ".write_samples", "must be a boolean");
    }
    spec.outputs.write_samples = e["write_samples"].get<bool>();
  }
  if (e.contains("write_reports")) {
    if (!e["write_reports"].is_boolean()) {
      bad(where + ".write_reports", "must be a boolean");
    }
    spec.outputs.write_reports = e["write_reports"].get<bool>();
  }

  try {
    spec.validate();
  } catch (const std::invalid_argument& err) {
    bad(where, err.what());
  }
  return spec;
}

}  // namespace

Config parse_config_text(const std::string& text, const std::string& origin) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1;
    const std::size_t upto = std::min(text.size(), std::size_t(e.byte));
    for (std::size_t i = 0; i < upto; ++i) {
      if (text[i] == '\n') ++line;
    }
    throw ConfigError(origin + ":" + std::to_string(line) +
                      ": parse error: " + e.what());
  }

  if (!doc.is_object()) bad(origin, "top level must be an object");
  check_keys(doc, origin, {"master_seed", "out_dir", "threads", "experiments"});

  Config cfg;
  if (!doc.contains("master_seed") || !doc["master_seed"].is_number_unsigned()) {
    bad(origin + ".master_seed", "missing or not an unsigned integer");
  }
  cfg.master_seed = doc["master_seed"].get<std::uint64_t>();
  if (doc.contains("out_dir")) {
    if (!doc["out_dir"].is_string()) bad(origin + ".out_dir", "must be a string");
    cfg.out_dir = doc["out_dir"].get<std::string>();
  }
  if (doc.contains("threads")) {
    if (!doc["threads"].is_number_unsigned()) {
      bad(origin + ".threads", "must be an unsigned integer");
    }
    cfg.threads = doc["threads"].get<unsigned>();
  }
  if (!doc.contains("experiments") || !doc["experiments"].is_array() ||
      doc["experiments"].empty()) {
    bad(origin + ".experiments", "missing or empty");
  }

  std::set<std::string> names;
  std::size_t idx = 0;
  for (const auto& e : doc["experiments"]) {
    const std::string where = origin + ".experiments[" + std::to_string(idx) + "]";
    auto spec = parse_experiment(e, where, cfg.master_seed, cfg.threads);
    if (!names.insert(spec.name).second) {
      bad(where + ".name", "duplicate experiment name '" + spec.name + "'");
    }
    cfg.experiments.push_back(std::move(spec));
    ++idx;
  }
  return cfg;
}

Config parse_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(path + ": cannot open config file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str(), path);
}

}  // namespace exchlab::cli
