// ret14 command-line driver: verify and export.
#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "ret14/verify.hpp"

namespace {

int write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
  out.close();
  if (!out) {
    std::cerr << "ret14: cannot write '" << path << "'\n";
    return ret14::kExitRuntimeError;
  }
  return ret14::kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Relativistic 14-moment closure construction and verification"};
  app.require_subcommand(1);

  std::string config_path;
  std::vector<std::string> suites;
  std::string report_path;
  bool quiet = false;
  auto* verify = app.add_subcommand("verify", "Run verification suites and emit a JSON report");
  verify->add_option("--config", config_path, "JSON configuration")->required();
  verify->add_option("--suite", suites, "Suite to run (repeatable); default: the config's list");
  verify->add_option("--report", report_path, "Report path; default: output.report or stdout");
  verify->add_flag("--quiet,-q", quiet, "No per-suite summary on stderr");

  std::string out_dir;
  auto* exporter = app.add_subcommand("export", "Write coefficient, projection and limit tables");
  exporter->add_option("--config", config_path, "JSON configuration")->required();
  exporter->add_option("--out", out_dir, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return ret14::kExitConfigError;
  }

  try {
    const ret14::RunConfig cfg = ret14::load_config(config_path);
    if (verify->parsed()) {
      ret14::VerifyOptions opts;
      opts.suites = suites;
      const ret14::VerifyResult res = ret14::run_verify(cfg, opts);
      const std::string text = ret14::serialize_report(res.report);
      std::string target = report_path;
      if (target.empty() && cfg.output.report) target = *cfg.output.report;
      if (target.empty()) {
        std::cout << text;
      } else if (int rc = write_text(target, text); rc != 0) {
        return rc;
      }
      if (!quiet) {
        for (const auto& [name, status] : res.report["summary"]["suites"].items()) {
          std::cerr << name << ": " << status.get<std::string>() << '\n';
        }
      }
      return res.exit_code;
    }
    for (const auto& p : ret14::run_export(cfg, out_dir)) std::cerr << "wrote " << p.string() << '\n';
    return ret14::kExitPass;
  } catch (const ret14::ConfigError& e) {
    std::cerr << "ret14: configuration error: " << e.what() << '\n';
    return ret14::kExitConfigError;
  } catch (const std::exception& e) {
    std::cerr << "ret14: " << e.what() << '\n';
    return ret14::kExitRuntimeError;
  }
}
