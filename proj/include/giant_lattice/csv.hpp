// csv.hpp — CSV tables (header row, comma separated, LF line endings).
// Reals are written with 17 significant digits so every value round-trips.

#pragma once

#include <cstdint>
#include <filesystem>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

namespace giant_lattice {

std::string format_real(double v);

class CsvWriter {
public:
    explicit CsvWriter(std::initializer_list<std::string_view> header);
    explicit CsvWriter(const std::vector<std::string>& header);

    CsvWriter& cell(double v);
    CsvWriter& cell(std::int64_t v);
    CsvWriter& cell(std::uint64_t v);
    CsvWriter& cell(int v) { return cell(static_cast<std::int64_t>(v)); }
    CsvWriter& text(std::string_view s);
    CsvWriter& empty();
    void end_row();

    const std::string& str() const { return buf_; }
    std::size_t rows() const { return rows_; }

    // Writes the table to `path`; throws IoError on failure.
    void save(const std::filesystem::path& path) const;

private:
    void sep();

    std::string buf_;
    std::size_t columns_ = 0;
    std::size_t in_row_ = 0;
    std::size_t rows_ = 0;
};

void write_file(const std::filesystem::path& path, std::string_view contents);

}  // namespace giant_lattice
