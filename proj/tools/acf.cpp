// acf: build almost closed one-forms, decide truncated potential problems
// and audit the resulting certificates.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <string>

#include "acf/acf.hpp"

namespace fs = std::filesystem;

namespace {

void write_files(const acf::CommandResult& r, const std::string& out_dir) {
  if (out_dir.empty() || r.files.empty()) return;
  fs::create_directories(out_dir);
  for (const auto& [name, content] : r.files) {
    std::ofstream f(fs::path(out_dir) / name, std::ios::binary);
    if (!f) throw acf::InputError("cannot write '" + (fs::path(out_dir) / name).string() + "'");
    f << content;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Almost closed one-forms and truncated potential problems"};
  app.require_subcommand(1);

  std::string format = "text";
  std::string out_dir;
  std::uint64_t seed = 0;
  bool seed_given = false;
  unsigned order = 0;
  unsigned parallel = 1;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--format", format, "Output format")->check(CLI::IsMember({"text", "json"}));
  };
  auto add_out = [&](CLI::App* cmd, bool required) {
    auto* o = cmd->add_option("--out", out_dir, "Output directory");
    if (required) o->required();
  };

  std::function<acf::CommandResult()> action;

  std::string instance_path;
  auto* build = app.add_subcommand("build", "Build sigma from an instance file");
  build->add_option("instance", instance_path, "Instance JSON")->required()->check(CLI::ExistingFile);
  build->add_option("--seed", seed, "Override the instance seed")->each([&](const std::string&) { seed_given = true; });
  add_out(build, true);
  add_common(build);
  build->callback([&] {
    action = [&] {
      return acf::cmd_build(instance_path, seed_given ? std::optional<std::uint64_t>(seed) : std::nullopt,
                            format == "json" ? acf::OutputFormat::json : acf::OutputFormat::text);
    };
  });

  std::string sigma_path, c_path, d_path;
  auto* verify_ac = app.add_subcommand("verify-ac", "Check A_y - B_x = C A + D B degree by degree");
  verify_ac->add_option("--sigma", sigma_path, "One-form JSON")->required()->check(CLI::ExistingFile);
  verify_ac->add_option("--C", c_path, "Series JSON for C")->required()->check(CLI::ExistingFile);
  verify_ac->add_option("--D", d_path, "Series JSON for D")->required()->check(CLI::ExistingFile);
  add_common(verify_ac);
  verify_ac->callback([&] {
    action = [&] {
      return acf::cmd_verify_ac(sigma_path, c_path, d_path, format == "json" ? acf::OutputFormat::json : acf::OutputFormat::text);
    };
  });

  auto* decide = app.add_subcommand("decide", "Decide the truncated potential problem up to order M");
  decide->add_option("--sigma", sigma_path, "One-form JSON")->required()->check(CLI::ExistingFile);
  decide->add_option("--order", order, "Truncation order M")->required();
  decide->add_option("--seed", seed, "Seed for solution sampling");
  add_out(decide, false);
  add_common(decide);
  decide->callback([&] {
    action = [&] {
      return acf::cmd_decide(sigma_path, order, seed, format == "json" ? acf::OutputFormat::json : acf::OutputFormat::text);
    };
  });

  std::string cert_path;
  auto* verify_cert = app.add_subcommand("verify-cert", "Re-assemble the system and check a Farkas certificate");
  verify_cert->add_option("--sigma", sigma_path, "One-form JSON")->required()->check(CLI::ExistingFile);
  verify_cert->add_option("--cert", cert_path, "Certificate JSON")->required()->check(CLI::ExistingFile);
  add_common(verify_cert);
  verify_cert->callback([&] {
    action = [&] {
      return acf::cmd_verify_cert(sigma_path, cert_path, format == "json" ? acf::OutputFormat::json : acf::OutputFormat::text);
    };
  });

  auto add_cd = [&](CLI::App* cmd) {
    cmd->add_option("--C", c_path, "Series JSON for C")->required()->check(CLI::ExistingFile);
    cmd->add_option("--D", d_path, "Series JSON for D")->required()->check(CLI::ExistingFile);
    add_common(cmd);
  };
  auto* obstruction = app.add_subcommand("obstruction", "Print C_{1,x} + D_{1,y}");
  add_cd(obstruction);
  obstruction->callback([&] {
    action = [&] {
      return acf::cmd_obstruction(c_path, d_path, format == "json" ? acf::OutputFormat::json : acf::OutputFormat::text);
    };
  });
  auto* tilde = app.add_subcommand("tilde", "Print the shifted linear parts C1~, D1~");
  add_cd(tilde);
  tilde->callback([&] {
    action = [&] { return acf::cmd_tilde(c_path, d_path, format == "json" ? acf::OutputFormat::json : acf::OutputFormat::text); };
  });
  auto* converge = app.add_subcommand("converge-bound", "Coefficient growth constants for C, D of degree <= 1");
  add_cd(converge);
  converge->callback([&] {
    action = [&] {
      return acf::cmd_converge_bound(c_path, d_path, format == "json" ? acf::OutputFormat::json : acf::OutputFormat::text);
    };
  });

  std::string ideal_path;
  unsigned max_n = 0;
  bool max_n_given = false;
  auto* ideal = app.add_subcommand("ideal", "Ideal computations in the local ring");
  ideal->require_subcommand(1);
  auto add_ideal = [&](CLI::App* cmd) {
    cmd->add_option("ideal", ideal_path, "Ideal or one-form JSON")->required()->check(CLI::ExistingFile);
    cmd->add_option("--max-n", max_n, "Largest power of m to try")->each([&](const std::string&) { max_n_given = true; });
    add_common(cmd);
  };
  auto* min_power = ideal->add_subcommand("min-power", "Least N with m^N in the ideal");
  add_ideal(min_power);
  min_power->callback([&] {
    action = [&] {
      return acf::cmd_ideal_min_power(ideal_path, max_n_given ? std::optional<unsigned>(max_n) : std::nullopt,
                                      format == "json" ? acf::OutputFormat::json : acf::OutputFormat::text);
    };
  });
  auto* col = ideal->add_subcommand("colength", "Dimension of R/I");
  add_ideal(col);
  col->callback([&] {
    action = [&] {
      return acf::cmd_ideal_colength(ideal_path, max_n_given ? std::optional<unsigned>(max_n) : std::nullopt,
                                     format == "json" ? acf::OutputFormat::json : acf::OutputFormat::text);
    };
  });

  std::string phi_path, form_path;
  auto* vp = app.add_subcommand("verify-potential", "Compare the ideals of dPhi and omega mod m^M");
  vp->add_option("--phi", phi_path, "Series JSON for Phi")->required()->check(CLI::ExistingFile);
  vp->add_option("--form", form_path, "One-form JSON for omega")->required()->check(CLI::ExistingFile);
  vp->add_option("--order", order, "Order M")->required();
  add_common(vp);
  vp->callback([&] {
    action = [&] {
      return acf::cmd_verify_potential(phi_path, form_path, order, format == "json" ? acf::OutputFormat::json : acf::OutputFormat::text);
    };
  });

  std::string pattern;
  unsigned seeds = 1;
  bool order_given = false;
  auto* batch = app.add_subcommand("batch", "Build and decide many instances and seeds");
  batch->add_option("--glob", pattern, "Instance file pattern")->required();
  batch->add_option("--seeds", seeds, "Seeds per instance (instance seed + i)");
  batch->add_option("--order", order, "Order M (default N-1)")->each([&](const std::string&) { order_given = true; });
  batch->add_option("--parallel", parallel, "Worker threads");
  add_out(batch, false);
  add_common(batch);
  batch->callback([&] {
    action = [&] {
      return acf::cmd_batch(pattern, seeds, order_given ? std::optional<unsigned>(order) : std::nullopt, parallel,
                            format == "json" ? acf::OutputFormat::json : acf::OutputFormat::text);
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : acf::kExitInput;
  }

  try {
    const acf::CommandResult r = action();
    write_files(r, out_dir);
    std::cout << r.out;
    return r.exit_code;
  } catch (const acf::NotClosedError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return acf::kExitInput;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return acf::kExitInput;
  } catch (const std::out_of_range& e) {
    std::cerr << "error: " << e.what() << "\n";
    return acf::kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
}
