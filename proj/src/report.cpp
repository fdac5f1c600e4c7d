#include "sburg/report.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "sburg/errors.hpp"

namespace sburg {

namespace {

bool needs_quoting(const std::string& s) {
    return s.find_first_of(",\"\r\n") != std::string::npos;
}

std::string rfc4180(const std::string& s) {
    if (!needs_quoting(s)) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += '"';
    return out;
}

} // namespace

std::string format_double17(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

CsvReport::CsvReport(std::vector<std::string> header) : header_(std::move(header)) {}

CsvReport& CsvReport::begin_row() {
    rows_.emplace_back();
    return *this;
}

CsvReport& CsvReport::cell(const std::string& s) {
    rows_.back().push_back(s);
    return *this;
}

CsvReport& CsvReport::cell(double x) { return cell(format_double17(x)); }

CsvReport& CsvReport::cell(std::int64_t x) { return cell(std::to_string(x)); }

CsvReport& CsvReport::cell(bool pass) { return cell(std::string(pass ? "pass" : "fail")); }

std::string CsvReport::to_string() const {
    std::ostringstream os;
    for (std::size_t i = 0; i < header_.size(); ++i) os << (i ? "," : "") << rfc4180(header_[i]);
    os << "\r\n";
    for (const auto& row : rows_) {
        for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << rfc4180(row[i]);
        os << "\r\n";
    }
    return os.str();
}

std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string digest_hex(std::string_view bytes) {
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(fnv1a64(bytes)));
    return buf;
}

void write_text_file(const std::string& path, const std::string& content) {
    const std::filesystem::path p(path);
    if (p.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(p.parent_path(), ec);
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open for writing: " + path);
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw Error("write failed: " + path);
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open for reading: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string RunManifest::to_json() const {
    nlohmann::json j;
    j["version"] = version;
    j["config"] = config_text;
    nlohmann::json suites_j = nlohmann::json::array();
    for (const auto& s : suites) suites_j.push_back({{"name", s.name}, {"pass", s.pass}});
    j["suites"] = suites_j;
    nlohmann::json files_j = nlohmann::json::object();
    for (const auto& [name, hex] : file_digests) files_j[name] = hex;
    j["files"] = files_j;
    return j.dump(2) + "\n";
}

} // namespace sburg
