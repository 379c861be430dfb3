#include "tskit/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "toml_lite.hpp"
#include "tskit/error.hpp"

namespace tskit {

namespace {

using Json = nlohmann::ordered_json;

[[noreturn]] void bad(const std::string& key, const std::string& what) {
  throw Error(ErrorCode::InvalidConfig, "'" + key + "': " + what);
}

void reject_unknown(const Json& table, const std::string& where, std::initializer_list<std::string_view> known) {
  for (const auto& [k, v] : table.items()) {
    bool ok = false;
    for (auto kn : known) ok = ok || k == kn;
    if (!ok) bad(where + k, "unknown key");
  }
}

std::uint64_t get_unsigned(const Json& v, const std::string& key) {
  if (!v.is_number_integer()) bad(key, "expected an integer");
  const auto i = v.get<std::int64_t>();
  if (i < 0) bad(key, "must be non-negative");
  return static_cast<std::uint64_t>(i);
}

double get_real(const Json& v, const std::string& key) {
  if (!v.is_number()) bad(key, "expected a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) bad(key, "must be finite");
  return d;
}

bool get_bool(const Json& v, const std::string& key) {
  if (!v.is_boolean()) bad(key, "expected true or false");
  return v.get<bool>();
}

const Json* table(const Json& root, const std::string& name) {
  if (!root.contains(name)) return nullptr;
  const Json& t = root[name];
  if (!t.is_object()) bad(name, "expected a table");
  return &t;
}

std::string fmt_real(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  std::string s(buf, r.ptr);
  // Keep TOML floats recognisable as floats.
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

template <class T>
std::string fmt_list(const std::vector<T>& xs) {
  std::string s = "[";
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) s += ", ";
    s += std::to_string(xs[i]);
  }
  return s + "]";
}

}  // namespace

RunConfig parse_run_config(std::string_view toml) {
  const Json root = detail::parse_toml(toml);
  reject_unknown(root, "",
                 {"epochs", "minibatches_per_epoch", "learning_rate", "hidden", "seed", "patience", "standardize",
                  "sampler", "threshold", "experiment"});
  RunConfig rc;
  TrainConfig& c = rc.train;
  if (root.contains("epochs")) c.epochs = get_unsigned(root["epochs"], "epochs");
  if (root.contains("minibatches_per_epoch")) {
    c.minibatches_per_epoch = get_unsigned(root["minibatches_per_epoch"], "minibatches_per_epoch");
  }
  if (root.contains("learning_rate")) c.learning_rate = get_real(root["learning_rate"], "learning_rate");
  if (root.contains("hidden")) {
    const Json& h = root["hidden"];
    if (!h.is_array()) bad("hidden", "expected an array of widths");
    c.hidden.clear();
    for (const auto& w : h) c.hidden.push_back(get_unsigned(w, "hidden"));
  }
  if (root.contains("seed")) c.seed = get_unsigned(root["seed"], "seed");
  if (root.contains("patience")) c.patience = get_unsigned(root["patience"], "patience");
  if (root.contains("standardize")) c.standardize = get_bool(root["standardize"], "standardize");

  if (const Json* s = table(root, "sampler")) {
    reject_unknown(*s, "sampler.", {"num_roots", "walk_length", "presample_rounds"});
    if (s->contains("num_roots")) c.sampler.num_roots = get_unsigned((*s)["num_roots"], "sampler.num_roots");
    if (s->contains("walk_length")) c.sampler.walk_length = get_unsigned((*s)["walk_length"], "sampler.walk_length");
    if (s->contains("presample_rounds")) {
      c.sampler.presample_rounds = get_unsigned((*s)["presample_rounds"], "sampler.presample_rounds");
    }
  }
  if (const Json* t = table(root, "threshold")) {
    reject_unknown(*t, "threshold.", {"lower", "upper", "steps"});
    if (t->contains("lower")) c.threshold.lower = get_real((*t)["lower"], "threshold.lower");
    if (t->contains("upper")) c.threshold.upper = get_real((*t)["upper"], "threshold.upper");
    if (t->contains("steps")) c.threshold.steps = get_unsigned((*t)["steps"], "threshold.steps");
  }
  if (const Json* e = table(root, "experiment")) {
    reject_unknown(*e, "experiment.", {"seeds", "split_seed", "jobs"});
    if (e->contains("seeds")) {
      const Json& s = (*e)["seeds"];
      if (!s.is_array() || s.empty()) bad("experiment.seeds", "expected a non-empty array");
      rc.seeds.clear();
      for (const auto& v : s) rc.seeds.push_back(get_unsigned(v, "experiment.seeds"));
    }
    if (e->contains("split_seed")) rc.split_seed = get_unsigned((*e)["split_seed"], "experiment.split_seed");
    if (e->contains("jobs")) {
      rc.jobs = get_unsigned((*e)["jobs"], "experiment.jobs");
      if (rc.jobs == 0) bad("experiment.jobs", "must be >= 1");
    }
  }
  c.validate();
  if (c.sampler.walk_length == 0) bad("sampler.walk_length", "must be >= 1");
  if (c.sampler.presample_rounds == 0) bad("sampler.presample_rounds", "must be >= 1");
  return rc;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_run_config(ss.str());
}

std::string to_toml(const RunConfig& rc) {
  const TrainConfig& c = rc.train;
  std::ostringstream o;
  o << "epochs = " << c.epochs << '\n'
    << "minibatches_per_epoch = " << c.minibatches_per_epoch << '\n'
    << "learning_rate = " << fmt_real(c.learning_rate) << '\n'
    << "hidden = " << fmt_list(c.hidden) << '\n'
    << "seed = " << c.seed << '\n'
    << "patience = " << c.patience << '\n'
    << "standardize = " << (c.standardize ? "true" : "false") << "\n\n"
    << "[sampler]\n"
    << "num_roots = " << c.sampler.num_roots << '\n'
    << "walk_length = " << c.sampler.walk_length << '\n'
    << "presample_rounds = " << c.sampler.presample_rounds << "\n\n"
    << "[threshold]\n"
    << "lower = " << fmt_real(c.threshold.lower) << '\n'
    << "upper = " << fmt_real(c.threshold.upper) << '\n'
    << "steps = " << c.threshold.steps << "\n\n"
    << "[experiment]\n"
    << "seeds = " << fmt_list(rc.seeds) << '\n'
    << "split_seed = " << rc.split_seed << '\n'
    << "jobs = " << rc.jobs << '\n';
  return o.str();
}

std::string to_json(const RunConfig& rc) {
  const TrainConfig& c = rc.train;
  Json j;
  j["epochs"] = c.epochs;
  j["minibatches_per_epoch"] = c.minibatches_per_epoch;
  j["learning_rate"] = c.learning_rate;
  j["hidden"] = c.hidden;
  j["seed"] = c.seed;
  j["patience"] = c.patience;
  j["standardize"] = c.standardize;
  j["sampler"] = {{"num_roots", c.sampler.num_roots},
                  {"walk_length", c.sampler.walk_length},
                  {"presample_rounds", c.sampler.presample_rounds}};
  j["threshold"] = {{"lower", c.threshold.lower}, {"upper", c.threshold.upper}, {"steps", c.threshold.steps}};
  j["experiment"] = {{"seeds", rc.seeds}, {"split_seed", rc.split_seed}};
  return j.dump();
}

bool operator==(const TrainConfig& a, const TrainConfig& b) {
  return a.epochs == b.epochs && a.minibatches_per_epoch == b.minibatches_per_epoch &&
         a.learning_rate == b.learning_rate && a.hidden == b.hidden && a.seed == b.seed &&
         a.patience == b.patience && a.standardize == b.standardize &&
         a.sampler.num_roots == b.sampler.num_roots && a.sampler.walk_length == b.sampler.walk_length &&
         a.sampler.presample_rounds == b.sampler.presample_rounds && a.threshold.lower == b.threshold.lower &&
         a.threshold.upper == b.threshold.upper && a.threshold.steps == b.threshold.steps;
}

bool operator==(const RunConfig& a, const RunConfig& b) {
  return a.train == b.train && a.seeds == b.seeds && a.split_seed == b.split_seed && a.jobs == b.jobs;
}

}  // namespace tskit
