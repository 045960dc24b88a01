#pragma once

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace t1cli {

/// Shortest round-trip text for a double; "nan"/"inf" spelled out, empty for a missing value.
std::string fmt_num(double v);
std::string fmt_num(std::optional<double> v);

/// Writes every file under one directory with the config hash in its header.
class OutputDir {
 public:
  OutputDir(std::filesystem::path dir, std::string config_hash);

  class Csv {
   public:
    Csv(const std::filesystem::path& path, const std::string& hash, std::initializer_list<const char*> columns);
    void row(const std::vector<std::string>& cells);

   private:
    std::ofstream out_;
    std::size_t width_;
  };

  Csv csv(const std::string& name, std::initializer_list<const char*> columns) const;
  /// JSON has no comments; the hash goes in a top-level "config_hash" member.
  void json_file(const std::string& name, nlohmann::json body) const;
  void text(const std::string& name, const std::string& body) const;

  const std::filesystem::path& dir() const noexcept { return dir_; }

 private:
  std::filesystem::path dir_;
  std::string hash_;
};

}  // namespace t1cli
