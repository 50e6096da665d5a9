#include "pathlik/csv.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

namespace pathlik {

namespace {

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::vector<std::string> split_row(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string::npos) {
            out.push_back(line.substr(start));
            break;
        }
        out.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
    return out;
}

double parse_double(const std::string& cell, int line_no) {
    double v = 0.0;
    const char* begin = cell.data();
    const char* end = begin + cell.size();
    auto [ptr, ec] = std::from_chars(begin, end, v);
    if (ec != std::errc{} || ptr != end) {
        throw CsvError("cannot parse '" + cell + "' as a number", line_no);
    }
    return v;
}

void write_table(std::ostream& out, const Partition& partition,
                 const Eigen::MatrixXd& values, const char* prefix) {
    out << "t";
    for (int c = 1; c <= values.cols(); ++c) out << ',' << prefix << c;
    out << '\n';
    for (int r = 0; r < values.rows(); ++r) {
        out << format_double(partition.time(r));
        for (int c = 0; c < values.cols(); ++c) out << ',' << format_double(values(r, c));
        out << '\n';
    }
}

struct Table {
    std::vector<double> times;
    Eigen::MatrixXd values;
};

Table read_table(std::istream& in) {
    std::string line;
    int line_no = 0;

    if (!std::getline(in, line)) throw CsvError("empty file, expected a header", 1);
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto header = split_row(line);
    if (header.size() < 2 || header[0] != "t") {
        throw CsvError("expected header 't,<name>1,...'", line_no);
    }
    const std::size_t n_cols = header.size();

    std::vector<double> times;
    std::vector<double> flat;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto cells = split_row(line);
        if (cells.size() != n_cols) {
            throw CsvError("expected " + std::to_string(n_cols) + " columns, found " +
                               std::to_string(cells.size()),
                           line_no);
        }
        times.push_back(parse_double(cells[0], line_no));
        for (std::size_t c = 1; c < n_cols; ++c) {
            flat.push_back(parse_double(cells[c], line_no));
        }
    }
    if (times.size() < 2) throw CsvError("need at least two data rows", line_no + 1);

    Table table;
    table.values.resize(static_cast<int>(times.size()), static_cast<int>(n_cols - 1));
    for (std::size_t r = 0; r < times.size(); ++r) {
        for (std::size_t c = 0; c + 1 < n_cols; ++c) {
            table.values(static_cast<int>(r), static_cast<int>(c)) =
                flat[r * (n_cols - 1) + c];
        }
    }
    table.times = std::move(times);
    return table;
}

std::ifstream open_input(const std::string& filename) {
    std::ifstream in(filename);
    if (!in) throw std::runtime_error("cannot open " + filename + " for reading");
    return in;
}

std::ofstream open_output(const std::string& filename) {
    std::ofstream out(filename);
    if (!out) throw std::runtime_error("cannot open " + filename + " for writing");
    return out;
}

}  // namespace

void write_path_csv(std::ostream& out, const PiecewiseLinearPath& path) {
    write_table(out, path.partition, path.values, "x");
}

void write_path_csv(const std::string& filename, const PiecewiseLinearPath& path) {
    auto out = open_output(filename);
    write_path_csv(out, path);
}

PiecewiseLinearPath read_path_csv(std::istream& in) {
    Table table = read_table(in);
    return PiecewiseLinearPath(Partition(std::move(table.times)), std::move(table.values));
}

PiecewiseLinearPath read_path_csv(const std::string& filename) {
    auto in = open_input(filename);
    return read_path_csv(in);
}

void write_observations_csv(std::ostream& out, const ObservationSet& obs) {
    write_table(out, obs.partition, obs.values, "y");
}

void write_observations_csv(const std::string& filename, const ObservationSet& obs) {
    auto out = open_output(filename);
    write_observations_csv(out, obs);
}

ObservationSet read_observations_csv(std::istream& in) {
    Table table = read_table(in);
    return ObservationSet(Partition(std::move(table.times)), std::move(table.values));
}

ObservationSet read_observations_csv(const std::string& filename) {
    auto in = open_input(filename);
    return read_observations_csv(in);
}

}  // namespace pathlik
