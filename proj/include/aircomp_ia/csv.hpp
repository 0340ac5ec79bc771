#pragma once

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "aircomp_ia/errors.hpp"
#include "aircomp_ia/scalar.hpp"

namespace aircomp_ia {

inline std::string csv_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline std::string csv_rational(const Rational& v) { return rational_to_string(v); }

/// Single CSV output file: one comment line carrying the config hash and
/// master seed, a header row, then data rows. Formatting is fixed so that
/// re-running a config byte-reproduces the file.
class CsvFile {
public:
    CsvFile(const std::string& path, const std::string& config_hash, std::uint64_t seed,
            const std::vector<std::string>& header)
        : out_(path, std::ios::binary | std::ios::trunc) {
        if (!out_) throw Error("cannot open output file " + path);
        out_ << "# config_hash=" << config_hash << " seed=" << seed << "\n";
        write_row(header);
    }

    void write_row(const std::vector<std::string>& fields) {
        for (std::size_t i = 0; i < fields.size(); ++i) {
            if (i) out_ << ",";
            out_ << fields[i];
        }
        out_ << "\n";
    }

private:
    std::ofstream out_;
};

}  // namespace aircomp_ia
