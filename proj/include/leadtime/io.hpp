#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace leadtime {

// Shortest round-trip decimal form (std::to_chars). Used in all CSV output
// so files are byte-stable across runs and platforms.
std::string format_double(double v);

// Fixed 6 significant digits, for stdout.
std::string format_sig6(double v);

std::string read_file(const std::string& path);

// Write temp file + rename, so partial runs never leave corrupt outputs.
void atomic_write_file(const std::string& path, const std::string& content);

// Plain comma split; fields in this project never contain commas or quotes.
std::vector<std::string> split_csv_line(const std::string& line);

std::uint64_t fnv1a64(std::string_view data);

// Mass vector addressed by contiguous integer deltas.
struct MassCsv {
    int first_delta = 0;
    std::vector<double> mass;
};

// Reads a `delta,mass` CSV; deltas must be contiguous and increasing.
MassCsv read_mass_csv(const std::string& path);

std::string mass_csv_text(const std::vector<double>& mass, int first_delta);

} // namespace leadtime
