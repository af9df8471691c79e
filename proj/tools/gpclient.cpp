// gpclient: streams a dataset to a node and reports accuracy and latency.

#include <filesystem>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "gpnode/client/report.hpp"
#include "gpnode/client/stream.hpp"
#include "gpnode/error.hpp"

namespace fs = std::filesystem;
using namespace gpnode;

namespace {

fs::path run_path(const fs::path& out, std::size_t run, std::size_t runs) {
  if (runs == 1) return out;
  fs::path p = out;
  p.replace_filename(fmt::format("{}_run{}{}", out.stem().string(), run + 1, out.extension().string()));
  return p;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dataset streamer and evaluation client for gpnode"};
  app.require_subcommand(1);

  client::StreamSpec spec;
  double timeout_s = 1.0;
  std::size_t runs = 1;
  std::optional<std::string> out;
  std::optional<std::size_t> tail;

  auto* stream = app.add_subcommand("stream", "Send samples, collect replies, print a summary");
  stream->add_option("--target", spec.target, "Service read endpoint ip:port")->capture_default_str();
  stream->add_option("--listen", spec.listen, "Local endpoint replies arrive on ip:port")->capture_default_str();
  stream->add_option("--source", spec.source, "CSV file or toy-sine")->capture_default_str();
  stream->add_option("--rate", spec.rate_hz, "Send rate in Hz")->capture_default_str();
  stream->add_option("--count", spec.count, "Number of samples")->capture_default_str();
  stream->add_option("--runs", runs, "Monte-Carlo runs, each preceded by a -1 reset")->check(CLI::PositiveNumber);
  stream->add_option("--timeout", timeout_s, "Reply timeout in seconds")->capture_default_str();
  stream->add_option("--seed", spec.seed, "toy-sine seed")->capture_default_str();
  stream->add_option("--d-in", spec.d_in, "toy-sine input dimension")->capture_default_str();
  stream->add_option("--noise", spec.noise_std, "toy-sine noise standard deviation")->capture_default_str();
  stream->add_option("--tail", tail, "Samples in the tail RMSE (default 20%)");
  stream->add_option("--out", out, "Per-sample CSV report (suffixed _runN for several runs)");

  std::string reset_target = spec.target;
  double command_value = -1.0;
  auto* reset = app.add_subcommand("reset", "Send a single-value command (empties the model)");
  reset->add_option("--target", reset_target, "Service read endpoint ip:port")->capture_default_str();
  reset->add_option("--value", command_value, "Command value")->capture_default_str();

  std::string log_level = "warn";
  app.add_option("--log-level", log_level)->check(CLI::IsMember({"trace", "debug", "info", "warn", "error", "off"}));
  CLI11_PARSE(app, argc, argv);
  spdlog::set_level(spdlog::level::from_str(log_level));

  try {
    if (*reset) {
      client::send_command(reset_target, command_value);
      return 0;
    }

    spec.reply_timeout = std::chrono::duration<double>(timeout_s);
    spec.validate();
    std::vector<client::ReplyLog> logs;
    if (runs == 1) {
      logs.push_back(client::stream(spec));
    } else {
      logs = client::monte_carlo(spec, runs);
    }

    int status = 0;
    for (std::size_t r = 0; r < logs.size(); ++r) {
      const auto& log = logs[r];
      if (runs > 1) fmt::print("run {}\n", r + 1);
      fmt::print("{}", client::format_summary(log.summary(tail)));
      if (log.stray_replies > 0) fmt::print("stray_replies {}\n", log.stray_replies);
      if (log.error) {
        fmt::print(stderr, "gpclient: {}\n", *log.error);
        status = 1;
      }
      if (out) client::write_csv(log, run_path(*out, r, runs));
    }
    return status;
  } catch (const Error& e) {
    fmt::print(stderr, "gpclient: {} ({})\n", e.what(), to_string(e.code()));
    return 1;
  } catch (const std::exception& e) {
    fmt::print(stderr, "gpclient: {}\n", e.what());
    return 1;
  }
}
