#include "gpnode/client/report.hpp"

#include <fstream>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "gpnode/error.hpp"

namespace gpnode::client {

std::string csv_header(std::size_t d_in, std::size_t d_out) {
  std::string h = "index,t";
  for (std::size_t i = 1; i <= d_in; ++i) h += fmt::format(",x{}", i);
  for (std::size_t j = 1; j <= d_out; ++j) h += fmt::format(",y{}", j);
  for (std::size_t j = 1; j <= d_out; ++j) h += fmt::format(",mu{}", j);
  h += ",rtt_s,matched";
  return h;
}

void write_csv(const ReplyLog& log, std::ostream& out) {
  out << csv_header(log.d_in, log.d_out) << '\n';
  for (std::size_t i = 0; i < log.records.size(); ++i) {
    const auto& r = log.records[i];
    std::string line = fmt::format("{},{:.17g}", i, r.t);
    for (double v : r.x) line += fmt::format(",{:.17g}", v);
    for (double v : r.y_true) line += fmt::format(",{:.17g}", v);
    for (std::size_t j = 0; j < log.d_out; ++j) {
      line += r.matched ? fmt::format(",{:.17g}", r.mu[j]) : std::string(",");
    }
    line += r.matched ? fmt::format(",{:.9g},1", r.rtt) : std::string(",,0");
    out << line << '\n';
  }
}

void write_csv(const ReplyLog& log, const std::filesystem::path& file) {
  std::ofstream out(file);
  if (!out) throw Error(ErrorCode::io, fmt::format("cannot write {}", file.string()));
  write_csv(log, out);
}

std::string format_summary(const Summary& s) {
  return fmt::format(
      "sent          {}\n"
      "received      {}\n"
      "lost          {}\n"
      "rmse_overall  {:.6g}\n"
      "rmse_tail     {:.6g} (last {})\n"
      "rtt_p50_ms    {:.3f}\n"
      "rtt_p90_ms    {:.3f}\n"
      "rtt_p99_ms    {:.3f}\n"
      "rtt_max_ms    {:.3f}\n"
      "wall_time_s   {:.3f}\n",
      s.sent, s.received, s.lost, s.rmse_overall, s.rmse_tail, s.tail_k, s.rtt_p50 * 1e3, s.rtt_p90 * 1e3,
      s.rtt_p99 * 1e3, s.rtt_max * 1e3, s.wall_time);
}

}  // namespace gpnode::client
