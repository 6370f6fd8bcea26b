#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mscp/unavoidable.hpp"

namespace mscp::cli {

// One line of the results CSV.
struct RunRecord {
  std::string instance;
  std::string command;
  std::string config;
  std::string status;
  std::optional<std::size_t> lower;
  std::optional<std::size_t> upper;
  double seconds = 0.0;
  std::size_t iterations = 0;
  std::uint64_t nodes = 0;
  std::size_t certificate_size = 0;
  std::string puzzle;
};

std::string_view results_header();
std::string format_record(const RunRecord& r);
// Writes the header first when the file is new or empty.
void append_records(const std::filesystem::path& path, std::span<const RunRecord> records);

// Generation-time buckets in seconds: <=1, 1-10, 10-30, 30-60, 60-300,
// 300-600, 600-1800, 1800-3600, 3600-7200, >=7200. Upper edges inclusive.
inline constexpr std::array<double, 9> kBucketEdges{1, 10, 30, 60, 300, 600, 1800, 3600, 7200};
std::array<std::string_view, 10> bucket_labels();
std::size_t bucket_of(double seconds);
std::array<std::size_t, 10> time_histogram(const UnavoidableCollection& c);
void write_histogram(const std::array<std::size_t, 10>& h, std::ostream& out);

// Path for instance `index` of a batch: the path itself for a single
// instance, otherwise "<stem>_<index><ext>".
std::filesystem::path instance_path(const std::filesystem::path& base, std::size_t index, std::size_t total);

// Full command line without the program name. Returns the exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mscp::cli
