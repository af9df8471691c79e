#include "gpnode/client/dataset.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

#include <fmt/format.h>

#include "gpnode/error.hpp"
#include "gpnode/random.hpp"

namespace gpnode::client {

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) {
    while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ')) cell.pop_back();
    while (!cell.empty() && cell.front() == ' ') cell.erase(cell.begin());
    out.push_back(cell);
  }
  return out;
}

// Parses `x3` -> 3 for prefix 'x'.
std::optional<std::size_t> column_index(const std::string& name, char prefix) {
  if (name.size() < 2 || name[0] != prefix) return std::nullopt;
  std::size_t v = 0;
  for (std::size_t i = 1; i < name.size(); ++i) {
    if (name[i] < '0' || name[i] > '9') return std::nullopt;
    v = v * 10 + static_cast<std::size_t>(name[i] - '0');
  }
  return v;
}

}  // namespace

Dataset parse_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::invalid_config, "CSV is empty");
  const auto header = split_line(line);

  Dataset ds;
  std::optional<std::size_t> t_col;
  for (std::size_t c = 0; c < header.size(); ++c) {
    const auto& h = header[c];
    if (h == "t") {
      if (t_col) throw Error(ErrorCode::invalid_config, "CSV header repeats column 't'");
      t_col = c;
    } else if (auto i = column_index(h, 'x'); i && *i == ds.d_in + 1 && ds.d_out == 0 && !t_col) {
      ++ds.d_in;
    } else if (auto j = column_index(h, 'y'); j && *j == ds.d_out + 1 && ds.d_in > 0 && !t_col) {
      ++ds.d_out;
    } else {
      throw Error(ErrorCode::invalid_config,
                  fmt::format("CSV header column {} '{}' breaks the layout x1..xD,y1..yK[,t]", c + 1, h));
    }
  }
  if (ds.d_in == 0 || ds.d_out == 0) {
    throw Error(ErrorCode::invalid_config, "CSV header needs at least one x and one y column");
  }
  if (t_col) ds.timestamps.emplace();

  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto cells = split_line(line);
    if (cells.size() != header.size()) {
      throw Error(ErrorCode::invalid_config,
                  fmt::format("CSV line {} has {} cells, header has {}", line_no, cells.size(), header.size()));
    }
    DataRow row;
    for (std::size_t c = 0; c < cells.size(); ++c) {
      double v = 0.0;
      try {
        std::size_t used = 0;
        v = std::stod(cells[c], &used);
        if (used != cells[c].size()) throw std::invalid_argument("trailing characters");
      } catch (const std::exception&) {
        throw Error(ErrorCode::invalid_config,
                    fmt::format("CSV line {} column {}: '{}' is not a number", line_no, c + 1, cells[c]));
      }
      if (t_col && c == *t_col) {
        ds.timestamps->push_back(v);
      } else if (row.x.size() < ds.d_in) {
        row.x.push_back(v);
      } else {
        row.y.push_back(v);
      }
    }
    ds.rows.push_back(std::move(row));
  }
  return ds;
}

Dataset load_csv(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw Error(ErrorCode::not_found, fmt::format("cannot open dataset {}", file.string()));
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_csv(buf.str());
}

double toy_sine_truth(const std::vector<double>& x) { return std::sin(2.0 * std::numbers::pi * x.at(0)); }

Dataset toy_sine(std::size_t count, std::size_t d_in, double noise_std, std::uint64_t seed) {
  if (d_in == 0) throw Error(ErrorCode::invalid_argument, "toy_sine: d_in must be positive");
  std::mt19937_64 rng(seed);
  Dataset ds;
  ds.d_in = d_in;
  ds.d_out = 1;
  ds.rows.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    DataRow row;
    row.x.resize(d_in);
    for (auto& v : row.x) v = uniform_unit(rng);
    // Box-Muller on (0, 1] x [0, 1).
    const double u1 = 1.0 - uniform_unit(rng);
    const double u2 = uniform_unit(rng);
    const double eps = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    row.y = {toy_sine_truth(row.x) + noise_std * eps};
    ds.rows.push_back(std::move(row));
  }
  return ds;
}

void check_timestamps(const std::vector<double>& t) {
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (!std::isfinite(t[i])) {
      throw Error(ErrorCode::invalid_argument, fmt::format("timestamp {} is not finite", i));
    }
    if (i > 0 && !(t[i] > t[i - 1])) {
      throw Error(ErrorCode::invalid_argument,
                  fmt::format("timestamps must be strictly increasing: t[{}]={} after t[{}]={}", i, t[i], i - 1,
                              t[i - 1]));
    }
  }
}

}  // namespace gpnode::client
