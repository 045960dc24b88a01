#include "output.hpp"

#include <charconv>
#include <cmath>

#include "t1track/error.hpp"

namespace t1cli {

std::string fmt_num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string fmt_num(std::optional<double> v) { return v ? fmt_num(*v) : std::string(); }

OutputDir::OutputDir(std::filesystem::path dir, std::string config_hash)
    : dir_(std::move(dir)), hash_(std::move(config_hash)) {
  std::error_code ec;
  std::filesystem::create_directories(dir_, ec);
  if (ec) throw t1track::ConfigError("cannot create output directory '" + dir_.string() + "': " + ec.message());
}

OutputDir::Csv::Csv(const std::filesystem::path& path, const std::string& hash,
                    std::initializer_list<const char*> columns)
    : out_(path), width_(columns.size()) {
  if (!out_) throw t1track::ConfigError("cannot write '" + path.string() + "'");
  out_ << "# config_hash=" << hash << "\n";
  bool first = true;
  for (const char* c : columns) {
    out_ << (first ? "" : ",") << c;
    first = false;
  }
  out_ << "\n";
}

void OutputDir::Csv::row(const std::vector<std::string>& cells) {
  if (cells.size() != width_) throw t1track::Error("csv row width mismatch");
  for (std::size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << cells[i];
  out_ << "\n";
}

OutputDir::Csv OutputDir::csv(const std::string& name, std::initializer_list<const char*> columns) const {
  return Csv(dir_ / name, hash_, columns);
}

void OutputDir::json_file(const std::string& name, nlohmann::json body) const {
  body["config_hash"] = hash_;
  std::ofstream out(dir_ / name);
  if (!out) throw t1track::ConfigError("cannot write '" + (dir_ / name).string() + "'");
  out << body.dump(2) << "\n";
}

void OutputDir::text(const std::string& name, const std::string& body) const {
  std::ofstream out(dir_ / name);
  if (!out) throw t1track::ConfigError("cannot write '" + (dir_ / name).string() + "'");
  out << "# config_hash=" << hash_ << "\n" << body;
}

}  // namespace t1cli
