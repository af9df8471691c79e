#pragma once

#include <filesystem>
#include <ostream>
#include <string>

#include "gpnode/client/stream.hpp"

namespace gpnode::client {

/// `index,t,x1..xD,y1..yK,mu1..muK,rtt_s,matched`
std::string csv_header(std::size_t d_in, std::size_t d_out);

void write_csv(const ReplyLog& log, std::ostream& out);
void write_csv(const ReplyLog& log, const std::filesystem::path& file);

/// Human-readable multi-line summary.
std::string format_summary(const Summary& s);

}  // namespace gpnode::client
