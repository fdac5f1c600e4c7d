#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace sburg {

// CSV report builder: RFC-4180 quoting, decimal text with 17 significant
// digits so a written double round-trips bit-exactly.
class CsvReport {
  public:
    explicit CsvReport(std::vector<std::string> header);

    CsvReport& begin_row();
    CsvReport& cell(const std::string& s);
    CsvReport& cell(double x);
    CsvReport& cell(std::int64_t x);
    CsvReport& cell(bool pass); // rendered as "pass"/"fail"

    std::string to_string() const;
    std::size_t n_rows() const { return rows_.size(); }

  private:
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

std::string format_double17(double x);

// 64-bit FNV-1a over the byte content; hex string of the digest.
std::uint64_t fnv1a64(std::string_view bytes);
std::string digest_hex(std::string_view bytes);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

struct SuiteResult {
    std::string name;
    bool pass = false;
};

// JSON manifest: config snapshot, version, per-suite pass/fail, file digests.
struct RunManifest {
    std::string config_text;
    std::string version;
    std::vector<SuiteResult> suites;
    std::vector<std::pair<std::string, std::string>> file_digests; // (name, hex)

    std::string to_json() const;
};

inline constexpr const char* kVersion = "sburg 0.1.0";

} // namespace sburg
