#include "leadtime/io.hpp"

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <system_error>

#include "leadtime/errors.hpp"

namespace leadtime {

std::string format_double(double v) {
    char buf[40];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, ptr);
}

std::string format_sig6(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void atomic_write_file(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    fs::path target(path);
    if (target.has_parent_path()) {
        std::error_code ec;
        fs::create_directories(target.parent_path(), ec);
        if (ec) throw InputError("cannot create directory: " + target.parent_path().string());
    }
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw InputError("cannot write file: " + tmp.string());
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) throw InputError("write failed: " + tmp.string());
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) throw InputError("cannot rename " + tmp.string() + " to " + path);
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        std::size_t pos = line.find(',', start);
        if (pos == std::string::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    return fields;
}

std::uint64_t fnv1a64(std::string_view data) {
    std::uint64_t h = 0xCBF29CE484222325ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001B3ull;
    }
    return h;
}

MassCsv read_mass_csv(const std::string& path) {
    std::string text = read_file(path);
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw InputError("empty mass file: " + path);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "delta,mass") {
        throw InputError("bad header in " + path + ": expected 'delta,mass'");
    }
    MassCsv out;
    bool first = true;
    int expect = 0;
    int row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto fields = split_csv_line(line);
        if (fields.size() != 2) {
            throw InputError(path + " row " + std::to_string(row) + ": expected 2 fields");
        }
        int delta = 0;
        {
            const std::string& f = fields[0];
            auto [p, ec] = std::from_chars(f.data(), f.data() + f.size(), delta);
            if (ec != std::errc{} || p != f.data() + f.size()) {
                throw InputError(path + " row " + std::to_string(row) + ": bad delta '" + f + "'");
            }
        }
        double m = 0;
        {
            const std::string& f = fields[1];
            auto [p, ec] = std::from_chars(f.data(), f.data() + f.size(), m);
            if (ec != std::errc{} || p != f.data() + f.size()) {
                throw InputError(path + " row " + std::to_string(row) + ": bad mass '" + f + "'");
            }
        }
        if (first) {
            out.first_delta = delta;
            expect = delta;
            first = false;
        }
        if (delta != expect) {
            throw InputError(path + " row " + std::to_string(row) +
                             ": deltas must be contiguous (expected " +
                             std::to_string(expect) + ", got " + std::to_string(delta) + ")");
        }
        out.mass.push_back(m);
        ++expect;
    }
    if (out.mass.empty()) throw InputError("no mass rows in " + path);
    return out;
}

std::string mass_csv_text(const std::vector<double>& mass, int first_delta) {
    std::string s = "delta,mass\n";
    for (std::size_t i = 0; i < mass.size(); ++i) {
        s += std::to_string(first_delta + static_cast<int>(i));
        s += ',';
        s += format_double(mass[i]);
        s += '\n';
    }
    return s;
}

} // namespace leadtime
