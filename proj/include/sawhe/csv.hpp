#pragma once

#include <cstdint>
#include <string>
#include <vector>

// CSV emission and ingestion. Every emitted file carries a header row and
// a trailing manifest comment with the scenario hash, and identical inputs
// produce byte-identical files.

namespace sawhe {

// Scenario hash rendered as 16 lowercase hex digits.
std::string hash_hex(std::uint64_t h);

// Header row, then one row per entry with full-precision doubles, then
// "# scenario_hash=<hex>". Throws std::invalid_argument on ragged rows.
std::string csv_text(const std::vector<std::string>& columns,
                     const std::vector<std::vector<double>>& rows,
                     std::uint64_t scenario_hash);

// csv_text written to path; std::runtime_error when the file cannot be
// opened. Returns the byte count written.
std::size_t write_csv(const std::string& path,
                      const std::vector<std::string>& columns,
                      const std::vector<std::vector<double>>& rows,
                      std::uint64_t scenario_hash);

struct FreqResponseData {
    std::vector<double> f_hz;
    std::vector<double> re_amp;
    std::vector<double> im_amp;
};

// Read a `f_hz,re_amp,im_amp` file, the fit-input format. Comment lines
// start with '#'; the header row is required verbatim.
FreqResponseData read_freq_response_csv(const std::string& path);
FreqResponseData parse_freq_response_csv(const std::string& text,
                                         const std::string& name = "<csv>");

}  // namespace sawhe
