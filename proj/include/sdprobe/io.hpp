// io.hpp — CSV and JSON formats
//
// Floats are written with std::to_chars (shortest round-trip form), so output
// is locale-independent and re-reads to the identical double.
//
//   spectrum        omega,re_r,im_r,re_t,im_t,R,T,A[,sigma_R,sigma_T]
//   measured        omega,R,T[,sigma_R,sigma_T]
//   reconstruction  omega,J,flag[,sigma_J]
//   flatness        omega,f,flag
//   history         t,re_eps,im_eps,abs2
//   tabulated SD    omega,J

#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>

#include <json.hpp>

#include "sdprobe/dynamics.hpp"
#include "sdprobe/forward.hpp"
#include "sdprobe/reconstruct.hpp"
#include "sdprobe/spectral_density.hpp"

namespace sdprobe::io {

std::string format_double(double x);
double parse_double(std::string_view token);

void write_spectrum_csv(std::ostream& os, const ScatteringSpectrum& s);
// R and T (and sigma columns) taken from the noisy measurement.
void write_spectrum_csv(std::ostream& os, const ScatteringSpectrum& s, const MeasuredSpectrum& noisy);

// Accepts any CSV with omega, R, T columns (optionally sigma_R, sigma_T), in
// any order; extra columns are ignored. Throws ParseError.
MeasuredSpectrum read_measured_spectrum_csv(std::istream& is);
MeasuredSpectrum read_measured_spectrum_csv(const std::filesystem::path& path);

void write_measured_csv(std::ostream& os, const MeasuredSpectrum& ms);
void write_reconstruction_csv(std::ostream& os, const ReconstructionResult& res);
void write_flatness_csv(std::ostream& os, const FlatnessProfile& fp);
void write_history_csv(std::ostream& os, const EmissionHistory& h);

TabulatedSD read_tabulated_csv(std::istream& is);
TabulatedSD read_tabulated_csv(const std::filesystem::path& path);
void write_tabulated_csv(std::ostream& os, const TabulatedSD& table);

// {kind, params, support}. A tabulated SD may instead name a CSV file via
// params.file, resolved against base_dir.
nlohmann::json sd_to_json(const SpectralDensity& sd);
SpectralDensity sd_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir = {});

} // namespace sdprobe::io
