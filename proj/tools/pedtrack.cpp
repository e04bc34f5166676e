#include <exception>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "pedtrack/pedtrack.hpp"

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitAcceptance = 3;

pedtrack::RunConfig load_config(const std::string& path, const std::string& preset,
                                const std::string& out) {
  auto cfg = pedtrack::load_run_config(path);
  if (!preset.empty()) {
    try {
      pedtrack::preset_by_name(preset);
    } catch (const pedtrack::ParameterError& e) {
      throw pedtrack::ConfigError(e.what());
    }
    cfg.preset = preset;
  }
  if (!out.empty()) cfg.output_dir = out;
  return cfg;
}

void print_report(const pedtrack::VerifyReport& report) {
  std::cout << "tracks: " << report.track_count << "\n";
  for (const auto& a : report.actors) {
    std::cout << "actor " << a.actor_id << ": ";
    if (!a.track_id) {
      std::cout << "unmatched\n";
      continue;
    }
    std::cout << "track " << *a.track_id << "  rmse " << a.rmse_px << " px  coverage "
              << a.coverage << "  switches " << a.id_switches;
    if (a.speed_error_pct) std::cout << "  speed error " << *a.speed_error_pct << " %";
    if (a.min_speed_ratio) std::cout << "  min/cruise speed " << *a.min_speed_ratio;
    if (a.net_to_cumulative) std::cout << "  net/cumulative " << *a.net_to_cumulative;
    std::cout << "\n";
  }
  for (const auto& f : report.failures) std::cout << "FAIL " << f << "\n";
  std::cout << (report.passed() ? "verify: pass" : "verify: FAIL") << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Overhead pedestrian detection, tracking and kinematics"};
  app.require_subcommand(1);

  std::string synth_input, synth_out;
  auto* synth = app.add_subcommand("synth", "Render a builtin scenario or script to PPM frames");
  synth->add_option("scenario", synth_input, "Builtin name (s1..s5) or script file")->required();
  synth->add_option("out_dir", synth_out, "Output directory")->required();

  std::string track_config, track_preset, track_out;
  auto* track = app.add_subcommand("track", "Track pedestrians and write outputs");
  track->add_option("--config", track_config, "Run config file")->required();
  track->add_option("--preset", track_preset, "Detection preset s1..s4 (overrides the file)");
  track->add_option("--out", track_out, "Output directory (overrides the file)");

  std::string verify_config, verify_truth, verify_out;
  auto* verify = app.add_subcommand("verify", "Compare tracking output with ground truth");
  verify->add_option("--config", verify_config, "Run config file")->required();
  verify->add_option("--truth", verify_truth, "Ground-truth CSV")->required();
  verify->add_option("--out", verify_out, "Output directory holding the tracks CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*synth) {
      const auto r = pedtrack::cmd_synth(synth_input, synth_out);
      std::cout << "wrote " << r.frames_written << " frames, " << r.actors << " actor(s), "
                << r.truth_path.string() << "\n";
    } else if (*track) {
      const auto cfg = load_config(track_config, track_preset, track_out);
      std::cout << pedtrack::summary_text(pedtrack::cmd_track(cfg));
    } else if (*verify) {
      const auto cfg = load_config(verify_config, "", verify_out);
      const auto report = pedtrack::cmd_verify(cfg, verify_truth);
      print_report(report);
      if (!report.passed()) return kExitAcceptance;
    }
  } catch (const pedtrack::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
  return 0;
}
