#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "phav/fock_numerics.hpp"
#include "phav/phav_sampling.hpp"
#include "phav/raman_model.hpp"
#include "phav/spectrum.hpp"
#include "phav/sweeps.hpp"

namespace phav {

// Column layouts of every interchange file.
namespace schema {
inline const std::vector<std::string> kDataset{"pulse_index", "x"};
inline const std::vector<std::string> kHistogram{"bin_center", "density"};
inline const std::vector<std::string> kFock{"n", "p"};
inline const std::vector<std::string> kTrace{"delay_ps", "mean_n", "var_n", "q", "q_det"};
inline const std::vector<std::string> kSweep{"axis_value", "max_q", "q_det_ref"};
inline const std::vector<std::string> kSpectrum{"freq_thz", "magnitude"};
inline const std::vector<std::string> kWigner{"x", "y", "w"};
inline const std::vector<std::string> kNoisePoints{"mean", "variance"};
}  // namespace schema

/// Shortest decimal text that reads back to the same double.
std::string format_double(double v);

/// Numeric CSV contents, one vector per column.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> columns;

    std::size_t rows() const { return columns.empty() ? 0 : columns.front().size(); }
};

/// Reads a CSV whose header must equal `expected`. Every cell must parse as a
/// finite number. Throws ValidationError listing up to 10 violations with
/// their line numbers; a missing or unreadable file is also a ValidationError.
CsvTable read_csv(const std::filesystem::path& path, const std::vector<std::string>& expected);

/// Writes via a temporary file in the same directory and a rename.
void write_csv(const std::filesystem::path& path, const CsvTable& table);
void write_text_atomic(const std::filesystem::path& path, std::string_view content);

std::vector<double> read_dataset(const std::filesystem::path& path);
void write_dataset(const std::filesystem::path& path, std::span<const double> samples);

QuadratureHistogram read_histogram(const std::filesystem::path& path);
void write_histogram(const std::filesystem::path& path, const QuadratureHistogram& hist);

FockDistribution read_fock(const std::filesystem::path& path);
void write_fock(const std::filesystem::path& path, const FockDistribution& d);

PumpProbeTrace read_trace(const std::filesystem::path& path);
void write_trace(const std::filesystem::path& path, const PumpProbeTrace& trace);

void write_sweep(const std::filesystem::path& path, std::span<const SweepPoint> points);
void write_spectrum(const std::filesystem::path& path, const AmplitudeSpectrum& spec);
void write_wigner(const std::filesystem::path& path, const WignerGrid& grid);

std::vector<NoisePoint> read_noise_points(const std::filesystem::path& path);

}  // namespace phav
