#include "giant_lattice/csv.hpp"

#include "giant_lattice/errors.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <stdexcept>
#include <vector>

namespace giant_lattice {

std::string format_real(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    if (ec != std::errc()) throw std::runtime_error("format_real: conversion failed");
    return std::string(buf, ptr);
}

CsvWriter::CsvWriter(std::initializer_list<std::string_view> header) : columns_(header.size()) {
    for (auto h : header) text(h);
    end_row();
    rows_ = 0;
}

CsvWriter::CsvWriter(const std::vector<std::string>& header) : columns_(header.size()) {
    for (const auto& h : header) text(h);
    end_row();
    rows_ = 0;
}

void CsvWriter::sep() {
    if (in_row_ > 0) buf_ += ',';
    ++in_row_;
}

CsvWriter& CsvWriter::cell(double v) {
    sep();
    buf_ += format_real(v);
    return *this;
}

CsvWriter& CsvWriter::cell(std::int64_t v) {
    sep();
    buf_ += std::to_string(v);
    return *this;
}

CsvWriter& CsvWriter::cell(std::uint64_t v) {
    sep();
    buf_ += std::to_string(v);
    return *this;
}

CsvWriter& CsvWriter::text(std::string_view s) {
    sep();
    if (s.find_first_of(",\"\n\r") == std::string_view::npos) {
        buf_ += s;
        return *this;
    }
    buf_ += '"';
    for (char c : s) {
        if (c == '"') buf_ += '"';
        buf_ += c;
    }
    buf_ += '"';
    return *this;
}

CsvWriter& CsvWriter::empty() {
    sep();
    return *this;
}

void CsvWriter::end_row() {
    if (in_row_ != columns_) {
        throw std::logic_error("CsvWriter: row has " + std::to_string(in_row_) + " cells, expected " +
                               std::to_string(columns_));
    }
    buf_ += '\n';
    in_row_ = 0;
    ++rows_;
}

void CsvWriter::save(const std::filesystem::path& path) const { write_file(path, buf_); }

void write_file(const std::filesystem::path& path, std::string_view contents) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    out.flush();
    if (!out) throw IoError("failed writing '" + path.string() + "'");
}

}  // namespace giant_lattice
