// Copyright (c) 2026 The kinetic authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdio>
#include <initializer_list>
#include <ostream>
#include <string>
#include <vector>

namespace kinetic {

/// Full-precision scientific notation for a double.
inline std::string format_real(double x)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17e", x);
    return buf;
}

/// Minimal comma-separated writer: optional '# key=value' metadata lines,
/// one header row, then rows of reals or preformatted cells.
class CsvWriter {
  public:
    explicit CsvWriter(std::ostream& os) : os_(os) {}

    CsvWriter& meta(const std::string& key, const std::string& value)
    {
        os_ << "# " << key << '=' << value << '\n';
        return *this;
    }
    CsvWriter& meta(const std::string& key, double value)
    {
        return meta(key, format_real(value));
    }

    CsvWriter& header(std::initializer_list<std::string> cols)
    {
        return header(std::vector<std::string>(cols));
    }
    CsvWriter& header(const std::vector<std::string>& cols)
    {
        write_cells(cols);
        return *this;
    }

    CsvWriter& row(std::initializer_list<double> vals)
    {
        std::vector<std::string> cells;
        cells.reserve(vals.size());
        for (double v : vals)
            cells.push_back(format_real(v));
        write_cells(cells);
        return *this;
    }
    CsvWriter& row(const std::vector<std::string>& cells)
    {
        write_cells(cells);
        return *this;
    }

  private:
    void write_cells(const std::vector<std::string>& cells)
    {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i)
                os_ << ',';
            os_ << cells[i];
        }
        os_ << '\n';
    }

    std::ostream& os_;
};

}  // namespace kinetic
