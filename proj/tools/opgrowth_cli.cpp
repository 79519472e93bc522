// Copyright 2026 The opgrowth Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Batch driver over libopgrowth. Every output file gets a JSON sidecar
// (<file>.json) with the config echo, version and timing.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <unistd.h>

#include <CLI11.hpp>
#include <json.hpp>

#include "opgrowth/opgrowth.h"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

// Input or configuration problem; reported with exit code 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A library call failed; reported with exit code 1.
struct RunError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void check(og_status st, const std::string& what) {
  if (st == OG_OK) return;
  const std::string msg = what + ": " + og_last_error();
  if (st == OG_ERR_INVALID_ARGUMENT || st == OG_ERR_PARSE ||
      st == OG_ERR_WINDOW_TOO_SMALL || st == OG_ERR_DIMENSION_CAP) {
    throw UsageError(msg);
  }
  throw RunError(msg);
}

template <class T, void (*Free)(T*)>
struct Handle {
  T* p = nullptr;
  Handle() = default;
  Handle(const Handle&) = delete;
  Handle& operator=(const Handle&) = delete;
  Handle(Handle&& o) noexcept : p(o.p) { o.p = nullptr; }
  Handle& operator=(Handle&& o) noexcept {
    std::swap(p, o.p);
    return *this;
  }
  ~Handle() { Free(p); }
  T** out() { return &p; }
  T* get() const { return p; }
};

using Model = Handle<og_model, og_model_free>;
using Sequence = Handle<og_sequence, og_sequence_free>;
using State = Handle<og_state, og_state_free>;
using Collapse = Handle<og_collapse, og_collapse_free>;

template <class F>
std::string read_text(F&& f) {
  size_t needed = 0;
  check(f(nullptr, 0, &needed), "size query");
  std::string s(needed, '\0');
  check(f(s.data(), s.size(), &needed), "text export");
  s.resize(needed - 1);
  return s;
}

// 17 significant digits, shortest exact form for integers.
std::string num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string utc_now() {
  const std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_atomic(const fs::path& path, const std::string& body) {
  fs::create_directories(path.parent_path().empty() ? fs::path(".")
                                                    : path.parent_path());
  const fs::path tmp =
      path.string() + ".tmp." + std::to_string(static_cast<long>(getpid()));
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw RunError("cannot write " + tmp.string());
    f << body;
    f.flush();
    if (!f) throw RunError("write failed for " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp);
    throw RunError("cannot rename onto " + path.string() + ": " +
                   ec.message());
  }
}

std::string read_file(const fs::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw UsageError("cannot read " + path.string());
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

// Shared context for one CLI invocation.
struct Context {
  std::string command;
  json config_echo;  // raw config file contents, verbatim
  json effective;    // resolved settings after flag overrides
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  std::string started_at = utc_now();
  fs::path out = ".";
  bool failed = false;
  std::mutex mu;

  // Writes body to out/name plus the sidecar out/name.json.
  void emit(const std::string& name, const std::string& body,
            json extra = json::object(), bool partial = false) {
    const fs::path path = out / name;
    write_atomic(path, body);
    json side;
    side["file"] = name;
    side["command"] = command;
    side["version"] = og_version();
    side["config"] = config_echo;
    side["effective"] = effective;
    side["started_at"] = started_at;
    side["wall_seconds"] = std::chrono::duration<double>(
                               std::chrono::steady_clock::now() - start)
                               .count();
    side["partial"] = partial;
    for (auto& [k, v] : extra.items()) side[k] = v;
    write_atomic(path.string() + ".json", side.dump(2) + "\n");
    std::lock_guard lock(mu);
    std::cerr << "wrote " << path.string() << "\n";
  }
};

// ---- CSV input

struct Column {
  std::vector<double> a, b;
};

Column read_two_columns(const fs::path& path, const std::string& h1,
                        const std::string& h2) {
  std::istringstream in(read_file(path));
  std::string line;
  int lineno = 0;
  Column c;
  bool header = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    if (!header) {
      if (line != h1 + "," + h2) {
        throw UsageError(path.string() + ":" + std::to_string(lineno) +
                         ": expected header '" + h1 + "," + h2 + "'");
      }
      header = true;
      continue;
    }
    const auto comma = line.find(',');
    try {
      if (comma == std::string::npos) throw std::invalid_argument("no comma");
      std::size_t used = 0;
      const std::string s1 = line.substr(0, comma);
      const std::string s2 = line.substr(comma + 1);
      const double v1 = std::stod(s1, &used);
      if (used != s1.size()) throw std::invalid_argument("trailing text");
      const double v2 = std::stod(s2, &used);
      if (used != s2.size()) throw std::invalid_argument("trailing text");
      c.a.push_back(v1);
      c.b.push_back(v2);
    } catch (const std::exception&) {
      throw UsageError(path.string() + ":" + std::to_string(lineno) +
                       ": malformed row '" + line + "'");
    }
  }
  if (!header) throw UsageError(path.string() + ": empty file");
  return c;
}

Sequence load_sequence(const fs::path& path) {
  const Column c = read_two_columns(path, "n", "b_n");
  for (std::size_t i = 0; i < c.a.size(); ++i) {
    if (c.a[i] != static_cast<double>(i)) {
      throw UsageError(path.string() + ": n must run 0, 1, 2, ... (row " +
                       std::to_string(i + 1) + " has n = " + num(c.a[i]) +
                       ")");
    }
  }
  Sequence s;
  check(og_sequence_from_b(c.b.data(), c.b.size(), s.out()),
        "sequence " + path.string());
  return s;
}

std::vector<double> sequence_b(const og_sequence* s) {
  std::vector<double> b(og_sequence_length(s));
  check(og_sequence_copy_b(s, b.data(), b.size()), "copy sequence");
  return b;
}

std::string b_csv(const std::vector<double>& b) {
  std::string out = "n,b_n\n";
  for (std::size_t n = 0; n < b.size(); ++n) {
    out += std::to_string(n) + "," + num(b[n]) + "\n";
  }
  return out;
}

json sequence_meta(const og_sequence* s) {
  return json::parse(read_text([&](char* buf, size_t cap, size_t* needed) {
    return og_sequence_meta_json(s, buf, cap, needed);
  }));
}

// ---- configuration

// Reads a JSON object with a whitelist of keys; errors name the field.
class ConfigReader {
 public:
  ConfigReader(const json& j, std::string prefix) : j_(j), prefix_(prefix) {
    if (!j_.is_object()) fail("", "expected a JSON object");
  }

  void allow(std::initializer_list<const char*> keys) {
    for (const auto& item : j_.items()) {
      bool ok = false;
      for (const char* k : keys) ok = ok || item.key() == k;
      if (!ok) fail(item.key(), "unknown key");
    }
  }

  bool has(const char* key) const { return j_.contains(key); }
  const json& at(const char* key) const { return j_.at(key); }

  std::optional<double> number(const char* key) const {
    if (!has(key)) return std::nullopt;
    if (!at(key).is_number()) fail(key, "expected a number");
    const double v = at(key).get<double>();
    if (!std::isfinite(v)) fail(key, "must be finite");
    return v;
  }

  std::optional<int> integer(const char* key) const {
    if (!has(key)) return std::nullopt;
    if (!at(key).is_number_integer()) fail(key, "expected an integer");
    return at(key).get<int>();
  }

  std::optional<bool> boolean(const char* key) const {
    if (!has(key)) return std::nullopt;
    if (!at(key).is_boolean()) fail(key, "expected true or false");
    return at(key).get<bool>();
  }

  std::optional<std::string> string(const char* key) const {
    if (!has(key)) return std::nullopt;
    if (!at(key).is_string()) fail(key, "expected a string");
    return at(key).get<std::string>();
  }

  [[noreturn]] void fail(const std::string& key, const std::string& why) const {
    throw UsageError("config " + prefix_ + (key.empty() ? "" : "." + key) +
                     ": " + why);
  }

 private:
  const json& j_;
  std::string prefix_;
};

struct FitRequest {
  std::string kind;
  int lo = -1;
  int hi = -1;
};

struct Dynamics {
  double t_max = 3.0;
  double dt = 0.01;
  int n_trunc = 0;  // 0: sequence depth
  std::string extension = "none";
  double tolerance = 1e-10;
  double leakage_threshold = 1e-10;
  double step = 0.0;
  bool dump_phi = false;
};

struct RunConfig {
  json model = json::object();
  int n_max = 20;
  double epsilon = 0.0;
  std::uint64_t max_terms = 0;
  int threads = 1;
  int jobs = 1;
  std::vector<double> sweep_g;
  std::vector<FitRequest> fits;
  bool collapse = true;
  double threshold = 0.2;
  int n_min = 1;
  Dynamics dynamics;
  std::string out;
};


og_fit_kind parse_fit(const std::string& s) {
  if (s == "linear_in_n") return OG_FIT_LINEAR_IN_N;
  if (s == "linear_in_sqrt_n") return OG_FIT_LINEAR_IN_SQRT_N;
  if (s == "n_over_bn_vs_W") return OG_FIT_N_OVER_BN_VS_W;
  throw UsageError("unknown fit kind '" + s +
                   "' (expected linear_in_n, linear_in_sqrt_n or "
                   "n_over_bn_vs_W)");
}

og_extension parse_extension(const std::string& s) {
  if (s == "none") return OG_EXTEND_NONE;
  if (s == "freeze_last") return OG_EXTEND_FREEZE_LAST;
  if (s == "linear_over_w") return OG_EXTEND_LINEAR_OVER_W;
  throw UsageError("unknown extension '" + s +
                   "' (expected none, freeze_last or linear_over_w)");
}

void read_dynamics(const json& j, Dynamics& d) {
  ConfigReader r(j, "dynamics");
  r.allow({"t_max", "dt", "n_trunc", "extension", "tolerance",
           "leakage_threshold", "step", "dump_phi"});
  d.t_max = r.number("t_max").value_or(d.t_max);
  d.dt = r.number("dt").value_or(d.dt);
  d.n_trunc = r.integer("n_trunc").value_or(d.n_trunc);
  d.extension = r.string("extension").value_or(d.extension);
  parse_extension(d.extension);
  d.tolerance = r.number("tolerance").value_or(d.tolerance);
  d.leakage_threshold =
      r.number("leakage_threshold").value_or(d.leakage_threshold);
  d.step = r.number("step").value_or(d.step);
  d.dump_phi = r.boolean("dump_phi").value_or(d.dump_phi);
}

RunConfig read_config(const json& j) {
  RunConfig c;
  ConfigReader r(j, "");
  r.allow({"model", "n_max", "epsilon", "max_terms", "threads", "jobs",
           "sweep", "analysis", "dynamics", "out"});
  if (r.has("model")) {
    if (!r.at("model").is_object()) r.fail("model", "expected an object");
    c.model = r.at("model");
  }
  c.n_max = r.integer("n_max").value_or(c.n_max);
  c.epsilon = r.number("epsilon").value_or(c.epsilon);
  if (auto m = r.integer("max_terms")) {
    if (*m < 0) r.fail("max_terms", "must be >= 0");
    c.max_terms = static_cast<std::uint64_t>(*m);
  }
  c.threads = r.integer("threads").value_or(c.threads);
  c.jobs = r.integer("jobs").value_or(c.jobs);
  c.out = r.string("out").value_or("");
  if (r.has("sweep")) {
    ConfigReader s(r.at("sweep"), "sweep");
    s.allow({"g"});
    if (!s.has("g") || !s.at("g").is_array() || s.at("g").empty()) {
      s.fail("g", "expected a nonempty array of numbers");
    }
    for (const auto& v : s.at("g")) {
      if (!v.is_number()) s.fail("g", "expected numbers");
      c.sweep_g.push_back(v.get<double>());
    }
  }
  if (r.has("analysis")) {
    ConfigReader a(r.at("analysis"), "analysis");
    a.allow({"fits", "collapse", "threshold", "n_min"});
    c.collapse = a.boolean("collapse").value_or(c.collapse);
    c.threshold = a.number("threshold").value_or(c.threshold);
    c.n_min = a.integer("n_min").value_or(c.n_min);
    if (a.has("fits")) {
      if (!a.at("fits").is_array()) a.fail("fits", "expected an array");
      int i = 0;
      for (const auto& f : a.at("fits")) {
        ConfigReader fr(f, "analysis.fits[" + std::to_string(i++) + "]");
        fr.allow({"kind", "window"});
        FitRequest q;
        q.kind = fr.string("kind").value_or("");
        if (q.kind.empty()) fr.fail("kind", "required");
        parse_fit(q.kind);
        if (fr.has("window")) {
          const json& w = fr.at("window");
          if (!w.is_array() || w.size() != 2 || !w[0].is_number_integer() ||
              !w[1].is_number_integer()) {
            fr.fail("window", "expected [n_lo, n_hi]");
          }
          q.lo = w[0].get<int>();
          q.hi = w[1].get<int>();
        }
        c.fits.push_back(q);
      }
    }
  }
  if (r.has("dynamics")) read_dynamics(r.at("dynamics"), c.dynamics);
  return c;
}

json effective_json(const RunConfig& c) {
  json fits = json::array();
  for (const auto& f : c.fits) {
    fits.push_back({{"kind", f.kind}, {"window", {f.lo, f.hi}}});
  }
  return {{"model", c.model},
          {"n_max", c.n_max},
          {"epsilon", c.epsilon},
          {"max_terms", c.max_terms},
          {"threads", c.threads},
          {"jobs", c.jobs},
          {"sweep", {{"g", c.sweep_g}}},
          {"analysis",
           {{"fits", fits},
            {"collapse", c.collapse},
            {"threshold", c.threshold},
            {"n_min", c.n_min}}},
          {"dynamics",
           {{"t_max", c.dynamics.t_max},
            {"dt", c.dynamics.dt},
            {"n_trunc", c.dynamics.n_trunc},
            {"extension", c.dynamics.extension},
            {"tolerance", c.dynamics.tolerance},
            {"leakage_threshold", c.dynamics.leakage_threshold},
            {"step", c.dynamics.step},
            {"dump_phi", c.dynamics.dump_phi}}}};
}

Model make_model(const json& model) {
  Model m;
  check(og_model_from_json(model.dump().c_str(), m.out()), "model");
  return m;
}

// Flags shared by every subcommand.
struct CommonFlags {
  std::string config;
  std::string out;
  int threads = 0;
  int n_max = 0;
  std::optional<double> epsilon;
  std::optional<std::uint64_t> max_terms;
  std::optional<double> h, g;
  std::string g_profile, observable;
  bool seedless = false;
};

void add_common(CLI::App* app, CommonFlags& f) {
  app->add_option("--config", f.config, "JSON run configuration");
  app->add_option("--out", f.out, "output directory");
  app->add_option("--threads", f.threads, "worker threads per run")
      ->check(CLI::PositiveNumber);
  app->add_option("--n-max", f.n_max, "Lanczos depth")
      ->check(CLI::PositiveNumber);
  app->add_option("--epsilon", f.epsilon, "pruning threshold (0 = exact)")
      ->check(CLI::NonNegativeNumber);
  app->add_option("--max-terms", f.max_terms, "term budget per vector");
  app->add_option("--h", f.h, "transverse field");
  app->add_option("--g", f.g, "longitudinal field");
  app->add_option("--g-profile", f.g_profile, "uniform, site0 or none");
  app->add_option("--observable", f.observable, "x, y, z, xx, yy or zz");
  app->add_flag("--seedless", f.seedless,
                "accepted for compatibility; nothing here is random");
}

RunConfig resolve(Context& ctx, const CommonFlags& f) {
  json raw = json::object();
  if (!f.config.empty()) {
    const std::string text = read_file(f.config);
    try {
      raw = json::parse(text);
    } catch (const json::parse_error& e) {
      throw UsageError(f.config + ": " + e.what());
    }
  }
  ctx.config_echo = raw;
  RunConfig c = read_config(raw);
  if (f.n_max > 0) c.n_max = f.n_max;
  if (f.epsilon) c.epsilon = *f.epsilon;
  if (f.max_terms) c.max_terms = *f.max_terms;
  if (f.threads > 0) c.threads = f.threads;
  if (!f.out.empty()) c.out = f.out;
  if (f.h) c.model["h"] = *f.h;
  if (f.g) c.model["g"] = *f.g;
  if (!f.g_profile.empty()) c.model["g_profile"] = f.g_profile;
  if (!f.observable.empty()) c.model["observable"] = f.observable;
  if (c.n_max < 1) throw UsageError("config n_max: must be >= 1");
  if (c.threads < 1) throw UsageError("config threads: must be >= 1");
  if (c.jobs < 1) throw UsageError("config jobs: must be >= 1");
  ctx.out = c.out.empty() ? fs::path(".") : fs::path(c.out);
  ctx.effective = effective_json(c);
  return c;
}

std::string g_label(double g) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", g);
  return buf;
}

// ---- subcommands

struct RunResult {
  double g = 0.0;
  Sequence seq;
  bool partial = false;
};

RunResult run_one(const RunConfig& c, json model, std::optional<double> g,
                  int threads) {
  if (g) {
    model["g"] = *g;
    if (*g != 0.0 && model.value("g_profile", "uniform") == "none") {
      model["g_profile"] = "uniform";
    }
  }
  const Model m = make_model(model);
  og_lanczos_options o = og_lanczos_options_default();
  o.epsilon = c.epsilon;
  o.max_terms = c.max_terms;
  o.threads = threads;
  RunResult r;
  r.g = model.value("g", 0.0);
  check(og_lanczos_run(m.get(), c.n_max, &o, nullptr, nullptr, r.seq.out()),
        "lanczos");
  r.partial = og_sequence_status(r.seq.get()) ==
              OG_LANCZOS_MEMORY_BUDGET_EXCEEDED;
  return r;
}

void emit_fits(Context& ctx, const RunConfig& c, const og_sequence* seq,
               const std::string& suffix) {
  for (const FitRequest& f : c.fits) {
    const og_fit_kind kind = parse_fit(f.kind);
    og_fit_report rep{};
    check(og_fit(seq, kind, f.lo, f.hi, &rep), "fit " + f.kind);
    const std::string csv = read_text([&](char* b, size_t cap, size_t* n) {
      return og_fit_csv(seq, kind, f.lo, f.hi, b, cap, n);
    });
    const json report = json::parse(read_text([&](char* b, size_t cap, size_t* n) {
      return og_fit_report_json(&rep, b, cap, n);
    }));
    const std::string base = "fit_" + f.kind + suffix;
    ctx.emit(base + ".csv", csv, {{"report", report}});
    write_atomic(ctx.out / (base + "_report.json"), report.dump(2) + "\n");
  }
}

int cmd_lanczos(Context& ctx, const CommonFlags& flags) {
  const RunConfig c = resolve(ctx, flags);
  if (c.sweep_g.empty()) {
    RunResult r = run_one(c, c.model, std::nullopt, c.threads);
    const json meta = sequence_meta(r.seq.get());
    ctx.emit("b.csv", b_csv(sequence_b(r.seq.get())), {{"run", meta}},
             r.partial);
    emit_fits(ctx, c, r.seq.get(), "");
    return r.partial ? kExitFailure : 0;
  }

  // Sweep: a g = 0 reference is added when a collapse is requested.
  std::vector<double> gs = c.sweep_g;
  const bool want_ref = c.collapse && gs.size() >= 2;
  if (want_ref && std::find(gs.begin(), gs.end(), 0.0) == gs.end()) {
    gs.insert(gs.begin(), 0.0);
  }
  const int jobs = std::min<int>(c.jobs, static_cast<int>(gs.size()));
  const int per_job = std::max(1, c.threads / jobs);
  std::vector<std::optional<RunResult>> results(gs.size());
  std::vector<std::string> errors(gs.size());
  {
    std::size_t next = 0;
    std::mutex mu;
    auto worker = [&] {
      for (;;) {
        std::size_t i;
        {
          std::lock_guard lock(mu);
          if (next >= gs.size()) return;
          i = next++;
        }
        try {
          results[i] = run_one(c, c.model, gs[i], per_job);
        } catch (const std::exception& e) {
          errors[i] = e.what();
        }
      }
    };
    std::vector<std::jthread> pool;
    for (int w = 1; w < jobs; ++w) pool.emplace_back(worker);
    worker();
  }

  bool any_failed = false;
  const og_sequence* ref = nullptr;
  std::vector<double> run_g;
  std::vector<const og_sequence*> runs;
  for (std::size_t i = 0; i < gs.size(); ++i) {
    if (!results[i]) {
      std::cerr << "error: g = " << g_label(gs[i]) << ": " << errors[i]
                << "\n";
      any_failed = true;
      continue;
    }
    RunResult& r = *results[i];
    any_failed = any_failed || r.partial;
    const std::string name =
        gs[i] == 0.0 ? "b_ref.csv" : "b_g" + g_label(gs[i]) + ".csv";
    ctx.emit(name, b_csv(sequence_b(r.seq.get())),
             {{"run", sequence_meta(r.seq.get())}, {"g", gs[i]}}, r.partial);
    emit_fits(ctx, c, r.seq.get(),
              gs[i] == 0.0 ? "_ref" : "_g" + g_label(gs[i]));
    if (gs[i] == 0.0) {
      ref = r.seq.get();
    } else {
      run_g.push_back(gs[i]);
      runs.push_back(r.seq.get());
    }
  }
  if (want_ref) {
    if (ref == nullptr || runs.size() < 2) {
      std::cerr << "error: collapse skipped, missing runs\n";
      return kExitFailure;
    }
    // Partial runs are cut to the shortest common depth.
    std::size_t len = og_sequence_length(ref);
    for (auto* s : runs) len = std::min(len, og_sequence_length(s));
    std::vector<Sequence> trimmed;
    std::vector<const og_sequence*> views;
    for (auto* s : runs) {
      std::vector<double> b = sequence_b(s);
      b.resize(len);
      Sequence t;
      check(og_sequence_from_b(b.data(), b.size(), t.out()), "trim");
      views.push_back(t.get());
      trimmed.push_back(std::move(t));
    }
    og_collapse_options o = og_collapse_options_default();
    o.threshold = c.threshold;
    o.n_min = c.n_min;
    Collapse col;
    check(og_collapse_run(ref, run_g.data(), views.data(), views.size(), &o,
                          col.out()),
          "collapse");
    const json report = json::parse(read_text([&](char* b, size_t cap, size_t* n) {
      return og_collapse_json(col.get(), b, cap, n);
    }));
    ctx.emit("collapse.csv",
             read_text([&](char* b, size_t cap, size_t* n) {
               return og_collapse_csv(col.get(), b, cap, n);
             }),
             {{"report", report}}, any_failed);
    ctx.emit("collapse.json", report.dump(2) + "\n", json::object(),
             any_failed);
  }
  return any_failed ? kExitFailure : 0;
}

struct EvolveFlags {
  std::string b_path;
  std::optional<double> t_max, dt, tolerance, leakage, step;
  int n_trunc = 0;
  std::string extension;
  bool dump_phi = false;
};

void add_evolve_flags(CLI::App* app, EvolveFlags& e) {
  app->add_option("--t-max", e.t_max, "last time of the grid");
  app->add_option("--dt", e.dt, "grid spacing");
  app->add_option("--n-trunc", e.n_trunc, "Krylov chain truncation")
      ->check(CLI::PositiveNumber);
  app->add_option("--extension", e.extension,
                  "none, freeze_last or linear_over_w");
  app->add_option("--tolerance", e.tolerance, "integration error target");
  app->add_option("--leakage-threshold", e.leakage,
                  "certification bound on phi_N^2");
  app->add_option("--step", e.step, "fixed RK4 step (overrides automatic)");
  app->add_flag("--dump-phi", e.dump_phi, "write t,n,phi long format");
}

Dynamics resolve_dynamics(Context& ctx, Dynamics d, const EvolveFlags& e) {
  if (e.t_max) d.t_max = *e.t_max;
  if (e.dt) d.dt = *e.dt;
  if (e.n_trunc > 0) d.n_trunc = e.n_trunc;
  if (!e.extension.empty()) d.extension = e.extension;
  if (e.tolerance) d.tolerance = *e.tolerance;
  if (e.leakage) d.leakage_threshold = *e.leakage;
  if (e.step) d.step = *e.step;
  if (e.dump_phi) d.dump_phi = true;
  parse_extension(d.extension);
  if (!(d.dt > 0.0) || !(d.t_max >= 0.0)) {
    throw UsageError("dynamics: need dt > 0 and t_max >= 0");
  }
  ctx.effective["dynamics"] = {{"t_max", d.t_max},
                               {"dt", d.dt},
                               {"n_trunc", d.n_trunc},
                               {"extension", d.extension},
                               {"tolerance", d.tolerance},
                               {"leakage_threshold", d.leakage_threshold},
                               {"step", d.step},
                               {"dump_phi", d.dump_phi}};
  return d;
}

std::vector<double> grid(const Dynamics& d) {
  const auto count = static_cast<std::size_t>(std::floor(d.t_max / d.dt + 1e-9));
  std::vector<double> t(count + 1);
  for (std::size_t i = 0; i <= count; ++i) t[i] = static_cast<double>(i) * d.dt;
  return t;
}

std::string series_csv(const std::string& header, const std::vector<double>& t,
                       const std::vector<double>& v) {
  std::string out = header + "\n";
  for (std::size_t i = 0; i < t.size(); ++i) {
    out += num(t[i]) + "," + num(v[i]) + "\n";
  }
  return out;
}

void emit_dynamics(Context& ctx, const og_sequence* seq, const Dynamics& d,
                   json extra) {
  const std::vector<double> times = grid(d);
  int n_trunc = d.n_trunc;
  if (n_trunc == 0) n_trunc = static_cast<int>(og_sequence_length(seq)) - 1;
  og_evolve_options o = og_evolve_options_default();
  o.tolerance = d.tolerance;
  o.leakage_threshold = d.leakage_threshold;
  o.step = d.step;
  o.store_phi = d.dump_phi ? 1 : 0;
  o.extension = parse_extension(d.extension);
  State st;
  check(og_evolve(seq, times.data(), times.size(), n_trunc, &o, st.out()),
        "evolve");
  std::vector<double> c(times.size()), depth(times.size());
  check(og_state_autocorrelation(st.get(), c.data(), c.size()), "C(t)");
  check(og_state_mean_depth(st.get(), depth.data(), depth.size()), "depth");
  extra["dynamics"] = json::parse(read_text([&](char* b, size_t cap, size_t* n) {
    return og_state_meta_json(st.get(), b, cap, n);
  }));
  ctx.emit("C.csv", series_csv("t,C", times, c), extra);
  ctx.emit("depth.csv", series_csv("t,mean_depth", times, depth), extra);
  if (d.dump_phi) {
    std::string out = "t,n,phi\n";
    std::vector<double> phi(static_cast<std::size_t>(n_trunc) + 1);
    for (std::size_t i = 0; i < times.size(); ++i) {
      check(og_state_phi(st.get(), i, phi.data(), phi.size()), "phi");
      for (std::size_t n = 0; n < phi.size(); ++n) {
        out += num(times[i]) + "," + std::to_string(n) + "," + num(phi[n]) +
               "\n";
      }
    }
    ctx.emit("phi.csv", out, extra);
  }
}

int cmd_evolve(Context& ctx, const CommonFlags& flags, const EvolveFlags& e) {
  const RunConfig c = resolve(ctx, flags);
  const Dynamics d = resolve_dynamics(ctx, c.dynamics, e);
  Sequence seq;
  json extra;
  if (!e.b_path.empty()) {
    seq = load_sequence(e.b_path);
    extra["input"] = e.b_path;
  } else {
    RunResult r = run_one(c, c.model, std::nullopt, c.threads);
    if (r.partial) throw RunError("Lanczos run hit the term budget");
    extra["run"] = sequence_meta(r.seq.get());
    seq = std::move(r.seq);
  }
  emit_dynamics(ctx, seq.get(), d, extra);
  return 0;
}

struct AnalyticFlags {
  std::string type = "II";
  double alpha = 1.0;
  double eta = 1.0;
  int n_phi = 0;
};

og_solvable_kind parse_type(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), ::toupper);
  if (s.rfind("TYPE_", 0) == 0) s = s.substr(5);
  if (s == "I" || s == "1") return OG_TYPE_I;
  if (s == "II" || s == "2") return OG_TYPE_II;
  if (s == "III" || s == "3") return OG_TYPE_III;
  throw UsageError("unknown type '" + s + "' (expected I, II or III)");
}

int cmd_analytic(Context& ctx, const CommonFlags& flags, const EvolveFlags& e,
                 const AnalyticFlags& a) {
  const RunConfig c = resolve(ctx, flags);
  const Dynamics d = resolve_dynamics(ctx, c.dynamics, e);
  const og_solvable s{parse_type(a.type), a.alpha, a.eta};
  ctx.effective["analytic"] = {
      {"type", a.type}, {"alpha", a.alpha}, {"eta", a.eta}, {"n_phi", a.n_phi}};
  Sequence seq;
  check(og_closed_form_sequence(&s, c.n_max, seq.out()), "closed form");
  ctx.emit("b.csv", b_csv(sequence_b(seq.get())));

  const std::vector<double> times = grid(d);
  std::vector<double> cs, depth;
  for (double t : times) {
    double v = 0.0;
    check(og_closed_form_autocorrelation(&s, t, &v), "C(t)");
    cs.push_back(v);
    check(og_closed_form_mean_depth(&s, t, &v), "depth");
    depth.push_back(v);
  }
  ctx.emit("C.csv", series_csv("t,C", times, cs));
  ctx.emit("depth.csv", series_csv("t,mean_depth", times, depth));
  if (d.dump_phi) {
    const int n_phi = a.n_phi > 0 ? a.n_phi : c.n_max;
    std::string out = "t,n,phi\n";
    for (double t : times) {
      for (int n = 0; n <= n_phi; ++n) {
        double v = 0.0;
        check(og_closed_form_phi(&s, n, t, &v), "phi");
        out += num(t) + "," + std::to_string(n) + "," + num(v) + "\n";
      }
    }
    ctx.emit("phi.csv", out);
  }
  return 0;
}

struct FitFlags {
  std::string in;
  std::vector<std::string> kinds;
  std::vector<int> window;
};

int cmd_fit(Context& ctx, const CommonFlags& flags, const FitFlags& f) {
  RunConfig c = resolve(ctx, flags);
  if (f.in.empty()) throw UsageError("fit needs --in <b.csv>");
  const Sequence seq = load_sequence(f.in);
  std::vector<std::string> kinds = f.kinds;
  if (kinds.empty() || (kinds.size() == 1 && kinds[0] == "all")) {
    kinds = {"linear_in_n", "linear_in_sqrt_n", "n_over_bn_vs_W"};
  }
  if (!f.window.empty() && f.window.size() != 2) {
    throw UsageError("--window takes two integers: n_lo n_hi");
  }
  c.fits.clear();
  for (const auto& k : kinds) {
    parse_fit(k);
    FitRequest q{k, -1, -1};
    if (f.window.size() == 2) {
      q.lo = f.window[0];
      q.hi = f.window[1];
    }
    c.fits.push_back(q);
  }
  ctx.effective = effective_json(c);
  ctx.effective["input"] = f.in;
  emit_fits(ctx, c, seq.get(), "");
  return 0;
}

struct CollapseFlags {
  std::string ref;
  std::vector<std::string> runs;
  std::optional<double> threshold;
  std::optional<int> n_min;
  double depth_slope = 0.0;
};

int cmd_collapse(Context& ctx, const CommonFlags& flags,
                 const CollapseFlags& f) {
  const RunConfig c = resolve(ctx, flags);
  if (f.ref.empty()) throw UsageError("collapse needs --ref <b_ref.csv>");
  if (f.runs.size() < 2) {
    throw UsageError("collapse needs at least two --run g=<path>");
  }
  const Sequence ref = load_sequence(f.ref);
  std::vector<Sequence> seqs;
  std::vector<const og_sequence*> views;
  std::vector<double> gs;
  for (const std::string& spec : f.runs) {
    const auto eq = spec.find('=');
    if (eq == std::string::npos) {
      throw UsageError("--run expects g=<path>, got '" + spec + "'");
    }
    double g = 0.0;
    try {
      std::size_t used = 0;
      g = std::stod(spec.substr(0, eq), &used);
      if (used != eq) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw UsageError("--run: bad g value in '" + spec + "'");
    }
    seqs.push_back(load_sequence(spec.substr(eq + 1)));
    views.push_back(seqs.back().get());
    gs.push_back(g);
  }
  og_collapse_options o = og_collapse_options_default();
  o.threshold = f.threshold.value_or(c.threshold);
  o.n_min = f.n_min.value_or(c.n_min);
  o.depth_slope = f.depth_slope;
  ctx.effective["collapse"] = {{"ref", f.ref},
                               {"runs", f.runs},
                               {"threshold", o.threshold},
                               {"n_min", o.n_min},
                               {"depth_slope", o.depth_slope}};
  Collapse col;
  check(og_collapse_run(ref.get(), gs.data(), views.data(), views.size(), &o,
                        col.out()),
        "collapse");
  const json report = json::parse(read_text([&](char* b, size_t cap, size_t* n) {
    return og_collapse_json(col.get(), b, cap, n);
  }));
  ctx.emit("collapse.csv", read_text([&](char* b, size_t cap, size_t* n) {
             return og_collapse_csv(col.get(), b, cap, n);
           }),
           {{"report", report}});
  ctx.emit("collapse.json", report.dump(2) + "\n");
  return 0;
}

int cmd_oracle(Context& ctx, const CommonFlags& flags, int sites) {
  const RunConfig c = resolve(ctx, flags);
  ctx.effective["sites"] = sites;
  const Model m = make_model(c.model);
  Sequence seq;
  check(og_oracle_dense(m.get(), sites, c.n_max, seq.out()), "oracle");
  ctx.emit("b.csv", b_csv(sequence_b(seq.get())),
           {{"run", sequence_meta(seq.get())}});
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  for (int i = 1; i < argc; ++i) {
    if (std::string(argv[i]).rfind("--seedless=", 0) == 0) {
      std::cerr << "error: --seedless takes no value\n";
      return kExitUsage;
    }
  }

  CLI::App app{"Operator growth on the Ising chain: Lanczos coefficients, "
               "Krylov dynamics and scaling analysis"};
  app.require_subcommand(1);
  // --h is the transverse field; help stays on --help only.
  app.set_help_flag("--help", "print this help and exit");
  app.set_version_flag("--version", std::string(og_version()));

  CommonFlags common;
  EvolveFlags evolve_flags;
  AnalyticFlags analytic_flags;
  FitFlags fit_flags;
  CollapseFlags collapse_flags;
  int sites = 4;

  auto* lanczos = app.add_subcommand("lanczos", "compute b_n (single or sweep)");
  add_common(lanczos, common);

  auto* evolve = app.add_subcommand("evolve", "Krylov-chain dynamics from b_n");
  add_common(evolve, common);
  add_evolve_flags(evolve, evolve_flags);
  evolve->add_option("--b", evolve_flags.b_path,
                     "n,b_n CSV (default: run Lanczos from the config)");

  auto* analytic = app.add_subcommand("analytic", "closed-form solvable chains");
  add_common(analytic, common);
  add_evolve_flags(analytic, evolve_flags);
  analytic->add_option("--type", analytic_flags.type, "I, II or III");
  analytic->add_option("--alpha", analytic_flags.alpha, "rate alpha > 0");
  analytic->add_option("--eta", analytic_flags.eta, "type III exponent");
  analytic->add_option("--n-phi", analytic_flags.n_phi,
                       "largest n in phi.csv (default n_max)");

  auto* fit = app.add_subcommand("fit", "straight-line fits of b_n");
  add_common(fit, common);
  fit->add_option("--in", fit_flags.in, "n,b_n CSV")->required();
  fit->add_option("--kind", fit_flags.kinds,
                  "linear_in_n, linear_in_sqrt_n, n_over_bn_vs_W or all");
  fit->add_option("--window", fit_flags.window, "n_lo n_hi")->expected(2);

  auto* col = app.add_subcommand("collapse", "g^-2 scaling collapse");
  add_common(col, common);
  col->add_option("--ref", collapse_flags.ref, "g = 0 n,b_n CSV");
  col->add_option("--run", collapse_flags.runs, "g=<path>, repeatable");
  col->add_option("--threshold", collapse_flags.threshold,
                  "relative departure for n_c");
  col->add_option("--n-min", collapse_flags.n_min, "first n considered");
  col->add_option("--depth-slope", collapse_flags.depth_slope,
                  "reference mean-depth slope, adds t_c");

  auto* oracle = app.add_subcommand("oracle", "dense periodic-chain Lanczos");
  add_common(oracle, common);
  oracle->add_option("--sites", sites, "chain length (2..8)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kExitUsage;
  }

  Context ctx;
  try {
    if (lanczos->parsed()) {
      ctx.command = "lanczos";
      return cmd_lanczos(ctx, common);
    }
    if (evolve->parsed()) {
      ctx.command = "evolve";
      return cmd_evolve(ctx, common, evolve_flags);
    }
    if (analytic->parsed()) {
      ctx.command = "analytic";
      return cmd_analytic(ctx, common, evolve_flags, analytic_flags);
    }
    if (fit->parsed()) {
      ctx.command = "fit";
      return cmd_fit(ctx, common, fit_flags);
    }
    if (col->parsed()) {
      ctx.command = "collapse";
      return cmd_collapse(ctx, common, collapse_flags);
    }
    ctx.command = "oracle";
    return cmd_oracle(ctx, common, sites);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
}
