// gpserve: runs the model slots and the admin API until SIGINT/SIGTERM.

#include <csignal>
#include <filesystem>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "gpnode/error.hpp"
#include "gpnode/service/admin_server.hpp"
#include "gpnode/service/node.hpp"

namespace fs = std::filesystem;
using namespace gpnode;

namespace {

struct Overrides {
  int slot = 0;
  std::optional<std::string> read_ip, send_ip, preset;
  std::optional<int> read_port, send_port;
  std::optional<double> rate;
};

service::SlotConfig& slot_config(service::NodeConfig& cfg, int id) {
  for (auto& s : cfg.slots) {
    if (s.id == id) return s;
  }
  service::SlotConfig s;
  s.id = id;
  s.endpoint = service::default_endpoint(id);
  s.tree.rng_seed = cfg.seed;
  cfg.slots.push_back(s);
  return cfg.slots.back();
}

bool touches_slot(const Overrides& o) {
  return o.read_ip || o.send_ip || o.preset || o.read_port || o.send_port || o.rate;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Remote GP regression node: UDP model slots plus a local admin API"};
  std::string config_file;
  Overrides o;
  std::optional<std::string> preset_dir, admin_ip;
  std::optional<int> admin_port;
  std::optional<std::uint64_t> seed;
  bool headless = false;
  std::string log_level = "info";

  app.add_option("-c,--config", config_file, "Node configuration (JSON)")->check(CLI::ExistingFile);
  app.add_option("--slot", o.slot, "Slot the endpoint/preset flags apply to")->check(CLI::NonNegativeNumber);
  app.add_option("--read-ip", o.read_ip, "Address the slot receives samples on");
  app.add_option("--read-port", o.read_port, "UDP port the slot receives samples on");
  app.add_option("--send-ip", o.send_ip, "Address replies are sent to");
  app.add_option("--send-port", o.send_port, "UDP port replies are sent to");
  app.add_option("--rate", o.rate, "Listening rate in Hz");
  app.add_option("--preset", o.preset, "Preset applied to the slot");
  app.add_option("--preset-dir", preset_dir, "Directory of preset JSON files");
  app.add_option("--admin-ip", admin_ip, "Admin API address");
  app.add_option("--admin-port", admin_port, "Admin API port (0 picks a free one)");
  app.add_option("--seed", seed, "Routing seed for every slot");
  app.add_flag("--headless", headless, "No admin API; switch on and start every slot");
  app.add_option("--log-level", log_level, "trace, debug, info, warn, error")
      ->check(CLI::IsMember({"trace", "debug", "info", "warn", "error", "off"}));
  CLI11_PARSE(app, argc, argv);

  spdlog::set_level(spdlog::level::from_str(log_level));

  try {
    service::NodeConfig cfg =
        config_file.empty() ? service::NodeConfig::defaults() : service::load_node_config(config_file);
    if (preset_dir) {
      cfg.preset_dir = *preset_dir;
    } else if (!fs::is_directory(cfg.preset_dir)) {
      for (const char* fallback : {GPNODE_INSTALL_PRESET_DIR, GPNODE_SOURCE_PRESET_DIR}) {
        if (fs::is_directory(fallback)) {
          cfg.preset_dir = fallback;
          break;
        }
      }
    }
    if (admin_ip) cfg.admin_ip = *admin_ip;
    if (admin_port) cfg.admin_port = *admin_port;
    if (seed) {
      cfg.seed = *seed;
      for (auto& s : cfg.slots) s.tree.rng_seed = *seed;
    }
    if (touches_slot(o)) {
      auto& s = slot_config(cfg, o.slot);
      if (o.read_ip) s.endpoint.read_ip = *o.read_ip;
      if (o.read_port) s.endpoint.read_port = *o.read_port;
      if (o.send_ip) s.endpoint.send_ip = *o.send_ip;
      if (o.send_port) s.endpoint.send_port = *o.send_port;
      if (o.rate) s.endpoint.listen_rate_hz = *o.rate;
      if (o.preset) s.preset = *o.preset;
      s.endpoint.validate();
    }

    // Block the shutdown signals before any thread starts so only sigwait sees them.
    sigset_t signals;
    sigemptyset(&signals);
    sigaddset(&signals, SIGINT);
    sigaddset(&signals, SIGTERM);
    pthread_sigmask(SIG_BLOCK, &signals, nullptr);

    service::Node node(cfg);
    node.apply_configured_presets();

    std::optional<service::AdminServer> admin;
    if (headless) {
      node.autostart(true);
    } else {
      admin.emplace(node);
      const int port = admin->start(cfg.admin_ip, cfg.admin_port);
      fmt::print("admin API on http://{}:{}/api/slots\n", cfg.admin_ip, port);
      node.autostart(false);
    }
    for (int id : node.slot_ids()) {
      const auto st = node.slot(id).state();
      fmt::print("slot {}: read {}:{} send {}:{} preset={} udp={} gp={} running={}\n", id, st.endpoint.read_ip,
                 st.endpoint.read_port, st.endpoint.send_ip, st.endpoint.send_port,
                 st.preset.empty() ? "-" : st.preset, st.udp_active, st.gp_active, st.running);
    }
    std::fflush(stdout);

    int sig = 0;
    sigwait(&signals, &sig);
    spdlog::info("event=shutdown signal={}", sig);
    if (admin) admin->stop();
    node.stop_all();
  } catch (const Error& e) {
    fmt::print(stderr, "gpserve: {} ({})\n", e.what(), to_string(e.code()));
    return 1;
  } catch (const std::exception& e) {
    fmt::print(stderr, "gpserve: {}\n", e.what());
    return 1;
  }
  return 0;
}
