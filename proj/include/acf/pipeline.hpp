#pragma once

// Command implementations behind the acf executable. Each command returns
// its exit code, its standard output and the files it wants written, so the
// same code runs from the CLI and from tests.

#include <glob.h>

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "acf/constructor.hpp"
#include "acf/decider.hpp"
#include "acf/digest.hpp"
#include "acf/ideal.hpp"
#include "acf/json_io.hpp"

namespace acf {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 2;
inline constexpr int kExitFail = 10;
inline constexpr int kExitDegenerate = 11;

enum class OutputFormat { text, json };

struct CommandResult {
  int exit_code = kExitOk;
  std::string out;                            // standard output
  std::map<std::string, std::string> files;  // file name -> contents
};

struct ManifestInput {
  std::string role;
  std::string path;
};

// The hash covers the command, input contents and parameters but not the
// paths, so moving inputs keeps artifacts byte-identical.
struct Manifest {
  std::string command;
  std::vector<ManifestInput> inputs;
  Json parameters = Json::object();

  Json record() const {
    Json in = Json::array();
    for (const auto& i : inputs) in.push_back({{"role", i.role}, {"sha256", sha256_hex(read_file_bytes(i.path))}});
    return {{"command", command}, {"inputs", in}, {"parameters", parameters}};
  }

  std::string hash() const { return sha256_hex(record().dump()); }

  Json document(const std::vector<std::string>& outputs) const {
    Json doc = record();
    Json paths = Json::object();
    for (const auto& i : inputs) paths[i.role] = i.path;
    doc["input_paths"] = paths;
    doc["manifest_hash"] = hash();
    doc["outputs"] = outputs;
    return doc;
  }
};

namespace detail {
inline Json stamped(Json j, const std::string& manifest_hash) {
  j["manifest_hash"] = manifest_hash;
  return j;
}

inline void add_manifest(CommandResult& r, const Manifest& m) {
  std::vector<std::string> names;
  for (const auto& [name, content] : r.files) names.push_back(name);
  names.push_back("manifest.json");
  r.files["manifest.json"] = dump(m.document(names));
}

inline std::string emit(OutputFormat f, const Json& j, const std::string& text) {
  return f == OutputFormat::json ? dump(j) : text;
}

inline OneForm load_form(const std::string& path) { return one_form_from_json(read_json_file(path)); }
inline TruncSeries load_series(const std::string& path) { return series_from_json(read_json_file(path)); }
inline Instance load_instance(const std::string& path) { return instance_from_json(read_json_file(path)); }

inline std::string optional_text(const std::optional<unsigned>& v) { return v ? std::to_string(*v) : "-"; }
}  // namespace detail

struct GuardedBuild {
  BuildResult result;
  std::uint64_t seed_used = 0;
  std::vector<std::uint64_t> rejected_seeds;
  std::optional<GuardReport> guard;
};

// Generic builds with d >= 18 (and the parts of degree d+1 available) must
// pass the genericity guard; a failing seed s is replaced by mix_seed(s).
inline GuardedBuild guarded_build(const Instance& inst, unsigned max_attempts = 64) {
  inst.validate();
  const bool guarded = inst.mode == BuildMode::generic && inst.d >= 18 && inst.N >= inst.d + 2;
  Instance current = inst;
  std::vector<std::uint64_t> rejected;
  for (unsigned attempt = 0; attempt < max_attempts; ++attempt) {
    GuardedBuild gb{build(current), current.seed, rejected, std::nullopt};
    if (!guarded) return gb;
    gb.guard = genericity_guard(gb.result.sigma);
    if (gb.guard->passes()) return gb;
    rejected.push_back(current.seed);
    current.seed = mix_seed(current.seed);
  }
  throw ContractError("genericity guard rejected " + std::to_string(max_attempts) + " consecutive seeds");
}

inline Json guarded_log(const GuardedBuild& gb) {
  Json log = construction_log_to_json(gb.result.state);
  log["seed_requested"] = gb.rejected_seeds.empty() ? gb.seed_used : gb.rejected_seeds.front();
  log["seed_used"] = gb.seed_used;
  log["rejected_seeds"] = gb.rejected_seeds;
  log["guard"] = gb.guard ? guard_to_json(*gb.guard) : Json(nullptr);
  return log;
}

inline CommandResult cmd_build(const std::string& instance_path, std::optional<std::uint64_t> seed,
                               OutputFormat fmt = OutputFormat::text) {
  Instance inst = detail::load_instance(instance_path);
  if (seed) inst.seed = *seed;
  Manifest m{"build", {{"instance", instance_path}}, {{"seed", inst.seed}}};
  const std::string h = m.hash();
  const GuardedBuild gb = guarded_build(inst);
  CommandResult r;
  r.files["sigma.json"] = dump(detail::stamped(one_form_to_json(gb.result.sigma), h));
  r.files["construction_log.json"] = dump(detail::stamped(guarded_log(gb), h));
  detail::add_manifest(r, m);
  std::ostringstream text;
  text << "built sigma in degrees " << inst.d << ".." << inst.N - 1 << " (seed " << gb.seed_used << ", "
       << gb.rejected_seeds.size() << " seeds rejected by the genericity guard)\n";
  Json summary = {{"seed_used", gb.seed_used}, {"rejected_seeds", gb.rejected_seeds}, {"manifest_hash", h}};
  r.out = detail::emit(fmt, summary, text.str());
  return r;
}

inline Json almost_closed_to_json(const AlmostClosedReport& rep) {
  Json res = Json::array();
  for (const auto& d : rep.residuals) res.push_back({{"degree", d.degree}, {"residual", format_poly(d.residual)}});
  Json j = {{"pass", rep.pass}, {"first_degree", rep.first_degree}, {"last_degree", rep.last_degree}, {"residuals", res}};
  j["first_failure"] = rep.first_failure ? Json(*rep.first_failure) : Json(nullptr);
  return j;
}

inline CommandResult cmd_verify_ac(const std::string& sigma_path, const std::string& c_path, const std::string& d_path,
                                   OutputFormat fmt = OutputFormat::text) {
  const OneForm sigma = detail::load_form(sigma_path);
  const TruncSeries C = detail::load_series(c_path), D = detail::load_series(d_path);
  const auto rep = verify_almost_closed(sigma, C, D);
  CommandResult r;
  r.exit_code = rep.pass ? kExitOk : kExitFail;
  std::ostringstream text;
  if (rep.pass) {
    text << "pass: A_y - B_x = C A + D B in degrees " << rep.first_degree << ".." << rep.last_degree << "\n";
  } else {
    text << "fail at degree " << *rep.first_failure << "\n";
  }
  r.out = detail::emit(fmt, almost_closed_to_json(rep), text.str());
  return r;
}

inline int exit_code_for(Verdict v) {
  switch (v) {
    case Verdict::feasible_up_to_M: return kExitOk;
    case Verdict::infeasible: return kExitFail;
    case Verdict::degenerate: return kExitDegenerate;
  }
  return kExitInput;
}

inline std::string outcome_summary(const DeciderOutcome& o) {
  std::ostringstream os;
  os << "verdict: " << to_string(o.verdict);
  if (o.failing_degree) os << " (failing degree " << *o.failing_degree << ")";
  os << "\nsystem: " << o.unknowns << " unknowns, " << o.equations << " equations, order " << o.order << "\n";
  return os.str();
}

inline CommandResult cmd_decide(const std::string& sigma_path, unsigned M, std::uint64_t seed,
                                OutputFormat fmt = OutputFormat::text) {
  const OneForm sigma = detail::load_form(sigma_path);
  Manifest m{"decide", {{"sigma", sigma_path}}, {{"order", M}, {"seed", seed}}};
  const std::string h = m.hash();
  DecideOptions opt;
  opt.seed = seed;
  const DeciderOutcome o = decide(sigma, M, opt);
  CommandResult r;
  r.exit_code = exit_code_for(o.verdict);
  const Json oj = detail::stamped(outcome_to_json(o), h);
  r.files["outcome.json"] = dump(oj);
  if (o.certificate) r.files["certificate.json"] = dump(detail::stamped(certificate_to_json(*o.certificate, M), h));
  if (o.witness) r.files["phi.json"] = dump(detail::stamped(series_to_json(o.witness->phi), h));
  detail::add_manifest(r, m);
  r.out = detail::emit(fmt, oj, outcome_summary(o) + staged_report(o));
  return r;
}

inline CommandResult cmd_verify_cert(const std::string& sigma_path, const std::string& cert_path,
                                     OutputFormat fmt = OutputFormat::text) {
  const OneForm sigma = detail::load_form(sigma_path);
  const CertificateDocument doc = certificate_from_json(read_json_file(cert_path));
  const PotentialSystem ps = assemble_system(sigma, doc.order);
  const AffineSystem sys = chart_system(ps, doc.certificate.chart, doc.certificate.through_degree);
  const bool hash_ok = system_digest(sys) == doc.certificate.system_hash;
  const bool size_ok = doc.certificate.certificate.row_combination.size() == sys.rows();
  const bool farkas_ok = size_ok && verify_farkas(sys, doc.certificate.certificate);
  CommandResult r;
  r.exit_code = hash_ok && farkas_ok ? kExitOk : kExitFail;
  Json j = {{"system_hash_matches", hash_ok}, {"row_count_matches", size_ok}, {"farkas_valid", farkas_ok}};
  std::ostringstream text;
  text << (r.exit_code == kExitOk ? "certificate valid" : "certificate INVALID") << " (hash " << (hash_ok ? "ok" : "mismatch")
       << ", farkas " << (farkas_ok ? "ok" : "fails") << ")\n";
  r.out = detail::emit(fmt, j, text.str());
  return r;
}

inline CommandResult cmd_obstruction(const std::string& c_path, const std::string& d_path,
                                     OutputFormat fmt = OutputFormat::text) {
  const Rational v = obstruction(detail::load_series(c_path), detail::load_series(d_path));
  CommandResult r;
  r.out = detail::emit(fmt, {{"obstruction", v.get_str()}}, v.get_str() + "\n");
  return r;
}

inline CommandResult cmd_tilde(const std::string& c_path, const std::string& d_path,
                               OutputFormat fmt = OutputFormat::text) {
  const auto [ct, dt] = tilde_transform(detail::load_series(c_path), detail::load_series(d_path));
  CommandResult r;
  r.out = detail::emit(fmt, {{"C1_tilde", poly_to_json(ct)}, {"D1_tilde", poly_to_json(dt)}},
                       "C1~ = " + format_poly(ct) + "\nD1~ = " + format_poly(dt) + "\n");
  return r;
}

inline CommandResult cmd_converge_bound(const std::string& c_path, const std::string& d_path,
                                        OutputFormat fmt = OutputFormat::text) {
  const auto b = convergence_bound(detail::load_series(c_path), detail::load_series(d_path));
  CommandResult r;
  r.out = detail::emit(fmt,
                       {{"C_const", b.C_const.get_str()},
                        {"beta", b.beta.get_str()},
                        {"radius_lower_bound", b.radius_lower_bound.get_str()}},
                       "C = " + b.C_const.get_str() + "\nbeta = " + b.beta.get_str() +
                           "\nradius >= " + b.radius_lower_bound.get_str() + "\n");
  return r;
}

inline unsigned default_max_n(const TruncatedIdeal& I, std::optional<unsigned> max_n) {
  if (max_n) return *max_n;
  if (I.trunc_order() == 0) throw InputError("ideal generators have zero truncation order");
  return I.trunc_order() - 1;
}

inline CommandResult cmd_ideal_min_power(const std::string& ideal_path, std::optional<unsigned> max_n,
                                         OutputFormat fmt = OutputFormat::text) {
  const TruncatedIdeal I = ideal_from_json(read_json_file(ideal_path));
  const unsigned bound = default_max_n(I, max_n);
  const auto n = min_power_in_ideal(I, bound);
  CommandResult r;
  r.exit_code = n ? kExitOk : kExitFail;
  Json j = {{"max_n", bound}};
  j["min_power"] = n ? Json(*n) : Json(nullptr);
  r.out = detail::emit(fmt, j, n ? std::to_string(*n) + "\n" : "not detected up to " + std::to_string(bound) + "\n");
  return r;
}

inline CommandResult cmd_ideal_colength(const std::string& ideal_path, std::optional<unsigned> max_n,
                                        OutputFormat fmt = OutputFormat::text) {
  const TruncatedIdeal I = ideal_from_json(read_json_file(ideal_path));
  const unsigned bound = default_max_n(I, max_n);
  const auto c = colength(I, bound);
  CommandResult r;
  r.exit_code = c ? kExitOk : kExitFail;
  Json j = {{"max_n", bound}};
  j["colength"] = c ? Json(*c) : Json(nullptr);
  r.out = detail::emit(fmt, j, c ? std::to_string(*c) + "\n" : "no power of m detected up to " + std::to_string(bound) + "\n");
  return r;
}

inline CommandResult cmd_verify_potential(const std::string& phi_path, const std::string& form_path, unsigned M,
                                          OutputFormat fmt = OutputFormat::text) {
  const bool ok = verify_potential(detail::load_series(phi_path), detail::load_form(form_path), M);
  CommandResult r;
  r.exit_code = ok ? kExitOk : kExitFail;
  r.out = detail::emit(fmt, {{"ideals_equal", ok}, {"order", M}},
                       ok ? "dPhi and omega generate the same ideal mod m^" + std::to_string(M) + "\n"
                          : "ideals differ mod m^" + std::to_string(M) + "\n");
  return r;
}

inline std::vector<std::string> expand_glob(const std::string& pattern) {
  glob_t g{};
  const int rc = ::glob(pattern.c_str(), 0, nullptr, &g);
  std::vector<std::string> out;
  if (rc == 0) {
    for (std::size_t i = 0; i < g.gl_pathc; ++i) out.emplace_back(g.gl_pathv[i]);
  }
  globfree(&g);
  std::sort(out.begin(), out.end());
  return out;
}

struct BatchRow {
  std::string instance;
  std::uint64_t seed_requested = 0;
  std::uint64_t seed_used = 0;
  std::size_t rejected = 0;
  Verdict verdict = Verdict::infeasible;
  std::optional<unsigned> failing_degree;
  bool certificate_verified = false;
};

// Runs guarded build + decide for seeds base, base+1, ..., base+K-1 of every
// instance matched by the glob. M defaults to N-1 per instance.
inline CommandResult cmd_batch(const std::string& pattern, unsigned seeds, std::optional<unsigned> order,
                               unsigned parallel, OutputFormat fmt = OutputFormat::text) {
  const auto paths = expand_glob(pattern);
  if (paths.empty()) throw InputError("glob '" + pattern + "' matched no instance files");
  if (seeds == 0) throw InputError("--seeds must be positive");
  struct Job {
    std::string path;
    Instance inst;
  };
  std::vector<Job> jobs;
  Manifest m{"batch", {}, {{"seeds", seeds}}};
  if (order) m.parameters["order"] = *order;
  for (const auto& p : paths) {
    const Instance base = detail::load_instance(p);
    m.inputs.push_back({"instance:" + std::to_string(m.inputs.size()), p});
    for (unsigned i = 0; i < seeds; ++i) {
      Instance inst = base;
      inst.seed = base.seed + i;
      jobs.push_back({p, inst});
    }
  }
  std::vector<BatchRow> rows(jobs.size());
  std::vector<std::string> errors(jobs.size());
  auto run = [&](std::size_t idx) {
    try {
      const auto& job = jobs[idx];
      const GuardedBuild gb = guarded_build(job.inst);
      const unsigned M = order ? *order : job.inst.N - 1;
      DecideOptions opt;
      opt.staged = false;
      const DeciderOutcome o = decide(gb.result.sigma, M, opt);
      BatchRow row{job.path, job.inst.seed, gb.seed_used, gb.rejected_seeds.size(), o.verdict, o.failing_degree, false};
      if (o.certificate) {
        bool all = true;
        for (const auto& cc : o.chart_certificates) all = all && verify_chart_certificate(gb.result.sigma, M, cc);
        row.certificate_verified = all;
      }
      rows[idx] = std::move(row);
    } catch (const std::exception& e) {
      errors[idx] = e.what();
    }
  };
  const unsigned workers = std::max(1u, std::min<unsigned>(parallel, static_cast<unsigned>(jobs.size())));
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t idx = w; idx < jobs.size(); idx += workers) run(idx);
    });
  }
  for (auto& t : pool) t.join();
  for (std::size_t i = 0; i < errors.size(); ++i) {
    if (!errors[i].empty()) throw InputError(jobs[i].path + " (seed " + std::to_string(jobs[i].inst.seed) + "): " + errors[i]);
  }

  std::map<std::string, std::size_t> counts;
  Json jr = Json::array();
  std::ostringstream text;
  text << "instance  seed  seed_used  rejected  verdict  failing_degree  certificates\n";
  for (const auto& row : rows) {
    ++counts[to_string(row.verdict)];
    Json rj = {{"instance", row.instance},
               {"seed", row.seed_requested},
               {"seed_used", row.seed_used},
               {"rejected_seeds", row.rejected},
               {"verdict", to_string(row.verdict)},
               {"certificates_verified", row.certificate_verified}};
    rj["failing_degree"] = row.failing_degree ? Json(*row.failing_degree) : Json(nullptr);
    jr.push_back(std::move(rj));
    text << row.instance << "  " << row.seed_requested << "  " << row.seed_used << "  " << row.rejected << "  "
         << to_string(row.verdict) << "  " << detail::optional_text(row.failing_degree) << "  "
         << (row.verdict == Verdict::infeasible ? (row.certificate_verified ? "verified" : "FAILED") : "-") << "\n";
  }
  text << "total " << rows.size() << ":";
  for (const auto& [v, c] : counts) text << " " << c << " " << v;
  text << "\n";
  const std::string h = m.hash();
  Json summary = {{"runs", jr}, {"counts", counts}, {"manifest_hash", h}};
  CommandResult r;
  r.files["summary.json"] = dump(summary);
  detail::add_manifest(r, m);
  r.out = detail::emit(fmt, summary, text.str());
  return r;
}

}  // namespace acf
