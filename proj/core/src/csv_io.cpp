#include "phav/csv_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "phav/error.hpp"

namespace phav {

namespace {

constexpr std::size_t kMaxReported = 10;

class ViolationLog {
public:
    explicit ViolationLog(std::string file) : file_(std::move(file)) {}

    void add(std::size_t line, const std::string& what) {
        ++count_;
        if (messages_.size() < kMaxReported) messages_.push_back("line " + std::to_string(line) + ": " + what);
    }
    bool empty() const { return count_ == 0; }

    [[noreturn]] void raise() const {
        std::ostringstream os;
        os << file_ << ": " << count_ << " violation" << (count_ == 1 ? "" : "s");
        for (const auto& m : messages_) os << "\n  " << m;
        if (count_ > messages_.size()) os << "\n  ...";
        throw ValidationError(os.str());
    }

private:
    std::string file_;
    std::size_t count_ = 0;
    std::vector<std::string> messages_;
};

std::vector<std::string_view> split(std::string_view line) {
    std::vector<std::string_view> cells;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        cells.push_back(line.substr(start, comma - start));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    for (auto& c : cells) {
        while (!c.empty() && (c.front() == ' ' || c.front() == '\t')) c.remove_prefix(1);
        while (!c.empty() && (c.back() == ' ' || c.back() == '\t' || c.back() == '\r')) c.remove_suffix(1);
    }
    return cells;
}

bool parse_number(std::string_view text, double& out) {
    if (!text.empty() && text.front() == '+') text.remove_prefix(1);
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, out);
    return ec == std::errc{} && ptr == end;
}

std::string join(const std::vector<std::string>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + v[i];
    return s;
}

// Checks applied to a column after parsing; returns an empty string when fine.
template <class Check>
void check_column(const CsvTable& t, std::size_t col, ViolationLog& log, Check&& check) {
    for (std::size_t r = 0; r < t.rows(); ++r) {
        const std::string msg = check(t.columns[col][r], r);
        if (!msg.empty()) log.add(r + 2, msg);
    }
}

}  // namespace

std::string format_double(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    if (ec != std::errc{}) throw NumericalError("cannot format value");
    return std::string(buf, ptr);
}

CsvTable read_csv(const std::filesystem::path& path, const std::vector<std::string>& expected) {
    std::ifstream in(path);
    if (!in) throw ValidationError(path.string() + ": cannot open file");
    ViolationLog log(path.string());
    std::string line;
    if (!std::getline(in, line)) throw ValidationError(path.string() + ": file is empty, expected header " + join(expected));

    CsvTable t;
    for (auto c : split(line)) t.header.emplace_back(c);
    if (t.header != expected) {
        throw ValidationError(path.string() + ": line 1: header '" + join(t.header) + "' does not match expected '" +
                              join(expected) + "'");
    }
    t.columns.assign(expected.size(), {});
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line == "\r") continue;
        const auto cells = split(line);
        if (cells.size() != expected.size()) {
            log.add(lineno, "expected " + std::to_string(expected.size()) + " fields, found " + std::to_string(cells.size()));
            continue;
        }
        std::vector<double> row(cells.size());
        bool ok = true;
        for (std::size_t c = 0; c < cells.size(); ++c) {
            if (!parse_number(cells[c], row[c])) {
                log.add(lineno, "field '" + expected[c] + "' is not a number: '" + std::string(cells[c]) + "'");
                ok = false;
            } else if (!std::isfinite(row[c])) {
                log.add(lineno, "field '" + expected[c] + "' is not finite");
                ok = false;
            }
        }
        if (ok)
            for (std::size_t c = 0; c < cells.size(); ++c) t.columns[c].push_back(row[c]);
    }
    if (!log.empty()) log.raise();
    if (t.rows() == 0) throw ValidationError(path.string() + ": no data rows");
    return t;
}

void write_text_atomic(const std::filesystem::path& path, std::string_view content) {
    namespace fs = std::filesystem;
    const fs::path dir = path.has_parent_path() ? path.parent_path() : fs::path(".");
    std::random_device rd;
    const fs::path tmp = dir / ("." + path.filename().string() + ".tmp" + std::to_string(rd()));
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw ArgumentError("cannot write to " + dir.string());
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.flush();
        if (!out) {
            std::error_code ec;
            fs::remove(tmp, ec);
            throw ArgumentError("write failed for " + path.string());
        }
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw ArgumentError("cannot move output into place at " + path.string());
    }
}

void write_csv(const std::filesystem::path& path, const CsvTable& table) {
    std::string text = join(table.header) + "\n";
    for (std::size_t r = 0; r < table.rows(); ++r) {
        for (std::size_t c = 0; c < table.columns.size(); ++c) {
            if (c) text += ',';
            text += format_double(table.columns[c][r]);
        }
        text += '\n';
    }
    write_text_atomic(path, text);
}

std::vector<double> read_dataset(const std::filesystem::path& path) {
    CsvTable t = read_csv(path, schema::kDataset);
    ViolationLog log(path.string());
    check_column(t, 0, log, [](double v, std::size_t r) {
        return v == static_cast<double>(r) ? std::string{} : "pulse_index must count up from 0";
    });
    if (!log.empty()) log.raise();
    return std::move(t.columns[1]);
}

void write_dataset(const std::filesystem::path& path, std::span<const double> samples) {
    CsvTable t{schema::kDataset, {std::vector<double>(samples.size()), {samples.begin(), samples.end()}}};
    for (std::size_t i = 0; i < samples.size(); ++i) t.columns[0][i] = static_cast<double>(i);
    write_csv(path, t);
}

QuadratureHistogram read_histogram(const std::filesystem::path& path) {
    CsvTable t = read_csv(path, schema::kHistogram);
    ViolationLog log(path.string());
    check_column(t, 1, log, [](double v, std::size_t) { return v >= 0.0 ? std::string{} : "density is negative"; });
    if (!log.empty()) log.raise();
    try {
        return QuadratureHistogram::from_bins(std::move(t.columns[0]), std::move(t.columns[1]));
    } catch (const ValidationError& e) {
        throw ValidationError(path.string() + ": " + e.what());
    }
}

void write_histogram(const std::filesystem::path& path, const QuadratureHistogram& hist) {
    write_csv(path, CsvTable{schema::kHistogram, {hist.centers(), {hist.densities().begin(), hist.densities().end()}}});
}

FockDistribution read_fock(const std::filesystem::path& path) {
    CsvTable t = read_csv(path, schema::kFock);
    ViolationLog log(path.string());
    check_column(t, 0, log, [](double v, std::size_t r) {
        return v == static_cast<double>(r) ? std::string{} : "n must count up from 0";
    });
    check_column(t, 1, log, [](double v, std::size_t) { return v >= 0.0 ? std::string{} : "probability is negative"; });
    if (!log.empty()) log.raise();
    try {
        return FockDistribution(std::move(t.columns[1]));
    } catch (const ValidationError& e) {
        throw ValidationError(path.string() + ": " + e.what());
    }
}

void write_fock(const std::filesystem::path& path, const FockDistribution& d) {
    CsvTable t{schema::kFock, {{}, {d.probs().begin(), d.probs().end()}}};
    for (int n = 0; n <= d.n_max(); ++n) t.columns[0].push_back(n);
    write_csv(path, t);
}

PumpProbeTrace read_trace(const std::filesystem::path& path) {
    CsvTable t = read_csv(path, schema::kTrace);
    ViolationLog log(path.string());
    check_column(t, 2, log, [](double v, std::size_t) { return v >= 0.0 ? std::string{} : "var_n is negative"; });
    if (!log.empty()) log.raise();
    return PumpProbeTrace{std::move(t.columns[0]), std::move(t.columns[1]), std::move(t.columns[2]),
                          std::move(t.columns[3]), std::move(t.columns[4])};
}

void write_trace(const std::filesystem::path& path, const PumpProbeTrace& trace) {
    trace.validate();
    write_csv(path, CsvTable{schema::kTrace, {trace.delays, trace.mean_n, trace.var_n, trace.q, trace.q_det}});
}

void write_sweep(const std::filesystem::path& path, std::span<const SweepPoint> points) {
    CsvTable t{schema::kSweep, {{}, {}, {}}};
    for (const auto& p : points) {
        t.columns[0].push_back(p.axis_value);
        t.columns[1].push_back(p.max_q);
        t.columns[2].push_back(p.q_det_ref);
    }
    write_csv(path, t);
}

void write_spectrum(const std::filesystem::path& path, const AmplitudeSpectrum& spec) {
    write_csv(path, CsvTable{schema::kSpectrum, {spec.freq_thz, spec.magnitude}});
}

void write_wigner(const std::filesystem::path& path, const WignerGrid& grid) {
    CsvTable t{schema::kWigner, {{}, {}, {}}};
    for (std::size_t ix = 0; ix < grid.x_axis.size(); ++ix) {
        for (std::size_t iy = 0; iy < grid.y_axis.size(); ++iy) {
            t.columns[0].push_back(grid.x_axis[ix]);
            t.columns[1].push_back(grid.y_axis[iy]);
            t.columns[2].push_back(grid.at(ix, iy));
        }
    }
    write_csv(path, t);
}

std::vector<NoisePoint> read_noise_points(const std::filesystem::path& path) {
    const CsvTable t = read_csv(path, schema::kNoisePoints);
    ViolationLog log(path.string());
    check_column(t, 0, log, [](double v, std::size_t) { return v > 0.0 ? std::string{} : "mean must be > 0"; });
    check_column(t, 1, log, [](double v, std::size_t) { return v >= 0.0 ? std::string{} : "variance is negative"; });
    if (!log.empty()) log.raise();
    std::vector<NoisePoint> pts(t.rows());
    for (std::size_t r = 0; r < t.rows(); ++r) pts[r] = NoisePoint{t.columns[0][r], t.columns[1][r]};
    return pts;
}

}  // namespace phav
