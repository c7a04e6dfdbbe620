// io.cpp — CSV/JSON readers and writers

#include "sdprobe/io.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <vector>

#include "sdprobe/errors.hpp"

namespace sdprobe::io {

namespace {

using nlohmann::json;

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (;;) {
        const std::size_t comma = line.find(',', start);
        out.push_back(trim(line.substr(start, comma - start)));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

struct Table {
    std::map<std::string, std::size_t, std::less<>> columns;
    std::vector<std::vector<std::string>> rows;
    std::vector<std::size_t> line_numbers;

    std::optional<std::size_t> find(std::string_view name) const {
        auto it = columns.find(name);
        if (it == columns.end()) return std::nullopt;
        return it->second;
    }
};

Table read_table(std::istream& is) {
    Table t;
    std::string line;
    std::size_t lineno = 0;
    bool header = false;
    while (std::getline(is, line)) {
        ++lineno;
        const std::string_view view = trim(line);
        if (view.empty() || view.front() == '#') continue;
        const auto cells = split(view);
        if (!header) {
            for (std::size_t c = 0; c < cells.size(); ++c) t.columns.emplace(std::string(cells[c]), c);
            header = true;
            continue;
        }
        if (cells.size() != t.columns.size()) {
            throw ParseError("line " + std::to_string(lineno) + ": expected " +
                             std::to_string(t.columns.size()) + " fields, got " + std::to_string(cells.size()));
        }
        t.rows.emplace_back(cells.begin(), cells.end());
        t.line_numbers.push_back(lineno);
    }
    if (!header) throw ParseError("missing CSV header");
    return t;
}

std::size_t require_column(const Table& t, std::string_view name) {
    if (auto c = t.find(name)) return *c;
    throw ParseError("missing CSV column '" + std::string(name) + "'");
}

// Cells are parsed per requested column, so unrelated text columns are fine.
std::vector<double> column(const Table& t, std::size_t c) {
    std::vector<double> v(t.rows.size());
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        try {
            v[i] = parse_double(t.rows[i][c]);
        } catch (const ParseError& e) {
            throw ParseError("line " + std::to_string(t.line_numbers[i]) + ": " + e.what());
        }
    }
    return v;
}

std::ifstream open_input(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path.string());
    return in;
}

double get_number(const json& obj, const char* key) {
    if (!obj.contains(key) || !obj.at(key).is_number()) {
        throw ParseError(std::string("spectral density params: missing numeric '") + key + "'");
    }
    return obj.at(key).get<double>();
}

std::optional<Support> get_support(const json& j) {
    if (!j.contains("support") || j.at("support").is_null()) return std::nullopt;
    const json& s = j.at("support");
    if (!s.is_array() || s.size() != 2 || !s[0].is_number() || !s[1].is_number()) {
        throw ParseError("spectral density 'support' must be [lo, hi]");
    }
    return Support{s[0].get<double>(), s[1].get<double>()};
}

} // namespace

std::string format_double(double x) {
    std::array<char, 64> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x);
    return std::string(buf.data(), res.ptr);
}

double parse_double(std::string_view token) {
    double value = 0.0;
    const char* first = token.data();
    const char* last = token.data() + token.size();
    if (first != last && *first == '+') ++first;
    const auto res = std::from_chars(first, last, value);
    if (res.ec != std::errc{} || res.ptr != last) {
        throw ParseError("not a number: '" + std::string(token) + "'");
    }
    return value;
}

void write_spectrum_csv(std::ostream& os, const ScatteringSpectrum& s) {
    os << "omega,re_r,im_r,re_t,im_t,R,T,A\n";
    for (std::size_t i = 0; i < s.size(); ++i) {
        os << format_double(s.grid[i]) << ',' << format_double(s.r[i].real()) << ','
           << format_double(s.r[i].imag()) << ',' << format_double(s.t[i].real()) << ','
           << format_double(s.t[i].imag()) << ',' << format_double(s.reflectance(i)) << ','
           << format_double(s.transmittance(i)) << ',' << format_double(s.A[i]) << '\n';
    }
}

void write_spectrum_csv(std::ostream& os, const ScatteringSpectrum& s, const MeasuredSpectrum& noisy) {
    if (noisy.size() != s.size() || !noisy.has_uncertainty()) {
        throw GridMismatch("noisy measurement does not match the spectrum");
    }
    os << "omega,re_r,im_r,re_t,im_t,R,T,A,sigma_R,sigma_T\n";
    for (std::size_t i = 0; i < s.size(); ++i) {
        os << format_double(s.grid[i]) << ',' << format_double(s.r[i].real()) << ','
           << format_double(s.r[i].imag()) << ',' << format_double(s.t[i].real()) << ','
           << format_double(s.t[i].imag()) << ',' << format_double(noisy.R[i]) << ','
           << format_double(noisy.T[i]) << ',' << format_double(s.A[i]) << ','
           << format_double((*noisy.sigma_R)[i]) << ',' << format_double((*noisy.sigma_T)[i]) << '\n';
    }
}

MeasuredSpectrum read_measured_spectrum_csv(std::istream& is) {
    const Table t = read_table(is);
    MeasuredSpectrum ms;
    ms.omega = column(t, require_column(t, "omega"));
    ms.R = column(t, require_column(t, "R"));
    ms.T = column(t, require_column(t, "T"));
    const auto sr = t.find("sigma_R");
    const auto st = t.find("sigma_T");
    if (sr.has_value() != st.has_value()) throw ParseError("sigma_R and sigma_T must appear together");
    if (sr) {
        ms.sigma_R = column(t, *sr);
        ms.sigma_T = column(t, *st);
    }
    try {
        ms.validate();
    } catch (const std::invalid_argument& e) {
        throw ParseError(e.what());
    }
    return ms;
}

MeasuredSpectrum read_measured_spectrum_csv(const std::filesystem::path& path) {
    auto in = open_input(path);
    return read_measured_spectrum_csv(in);
}

void write_measured_csv(std::ostream& os, const MeasuredSpectrum& ms) {
    const bool sig = ms.has_uncertainty();
    os << (sig ? "omega,R,T,sigma_R,sigma_T\n" : "omega,R,T\n");
    for (std::size_t i = 0; i < ms.size(); ++i) {
        os << format_double(ms.omega[i]) << ',' << format_double(ms.R[i]) << ',' << format_double(ms.T[i]);
        if (sig) os << ',' << format_double((*ms.sigma_R)[i]) << ',' << format_double((*ms.sigma_T)[i]);
        os << '\n';
    }
}

void write_reconstruction_csv(std::ostream& os, const ReconstructionResult& res) {
    const bool sig = res.sigma_J.has_value();
    os << (sig ? "omega,J,flag,sigma_J\n" : "omega,J,flag\n");
    for (std::size_t i = 0; i < res.size(); ++i) {
        os << format_double(res.omega[i]) << ',' << format_double(res.J[i]) << ',' << to_string(res.flags[i]);
        if (sig) os << ',' << format_double((*res.sigma_J)[i]);
        os << '\n';
    }
}

void write_flatness_csv(std::ostream& os, const FlatnessProfile& fp) {
    os << "omega,f,flag\n";
    for (std::size_t i = 0; i < fp.omega.size(); ++i) {
        os << format_double(fp.omega[i]) << ',' << format_double(fp.f[i]) << ',' << to_string(fp.flags[i]) << '\n';
    }
}

void write_history_csv(std::ostream& os, const EmissionHistory& h) {
    os << "t,re_eps,im_eps,abs2\n";
    for (std::size_t k = 0; k < h.size(); ++k) {
        os << format_double(h.times[k]) << ',' << format_double(h.eps[k].real()) << ','
           << format_double(h.eps[k].imag()) << ',' << format_double(h.population(k)) << '\n';
    }
}

TabulatedSD read_tabulated_csv(std::istream& is) {
    const Table t = read_table(is);
    try {
        return TabulatedSD(column(t, require_column(t, "omega")), column(t, require_column(t, "J")));
    } catch (const std::invalid_argument& e) {
        throw ParseError(e.what());
    }
}

TabulatedSD read_tabulated_csv(const std::filesystem::path& path) {
    auto in = open_input(path);
    return read_tabulated_csv(in);
}

void write_tabulated_csv(std::ostream& os, const TabulatedSD& table) {
    os << "omega,J\n";
    for (std::size_t i = 0; i < table.omega().size(); ++i) {
        os << format_double(table.omega()[i]) << ',' << format_double(table.values()[i]) << '\n';
    }
}

json sd_to_json(const SpectralDensity& sd) {
    json j;
    j["kind"] = std::string(to_string(sd.kind()));
    json params = json::object();
    switch (sd.kind()) {
        case SdKind::flat: params["level"] = std::get<FlatParams>(sd.params()).level; break;
        case SdKind::lorentzian: {
            const auto& p = std::get<LorentzianParams>(sd.params());
            params = {{"g", p.g}, {"gamma1", p.gamma1}, {"omega1", p.omega1}};
            break;
        }
        case SdKind::ohmic: {
            const auto& p = std::get<OhmicParams>(sd.params());
            params = {{"alpha", p.alpha}, {"omega_c", p.omega_c}};
            break;
        }
        case SdKind::band_gap: {
            const auto& p = std::get<BandGapParams>(sd.params());
            params = {{"strength", p.strength}, {"edge", p.edge}};
            break;
        }
        case SdKind::tabulated: {
            const auto& tab = std::get<TabulatedSD>(sd.params());
            params["omega"] = std::vector<double>(tab.omega().begin(), tab.omega().end());
            params["J"] = std::vector<double>(tab.values().begin(), tab.values().end());
            break;
        }
        case SdKind::zero: break;
    }
    j["params"] = params;
    if (sd.kind() == SdKind::zero) {
        j["support"] = nullptr;
    } else {
        j["support"] = {sd.support().lo, sd.support().hi};
    }
    return j;
}

SpectralDensity sd_from_json(const json& j, const std::filesystem::path& base_dir) {
    if (!j.is_object() || !j.contains("kind") || !j.at("kind").is_string()) {
        throw ParseError("spectral density must be an object with a string 'kind'");
    }
    const json params = j.value("params", json::object());
    const auto support = get_support(j);
    try {
        switch (parse_sd_kind(j.at("kind").get<std::string>())) {
            case SdKind::flat:
                if (!support) throw ParseError("flat spectral density needs a support");
                return SpectralDensity::flat(get_number(params, "level"), *support);
            case SdKind::lorentzian:
                return SpectralDensity::lorentzian(
                    {get_number(params, "g"), get_number(params, "gamma1"), get_number(params, "omega1")},
                    support);
            case SdKind::ohmic:
                return SpectralDensity::ohmic({get_number(params, "alpha"), get_number(params, "omega_c")},
                                              support);
            case SdKind::band_gap: {
                const BandGapParams p{get_number(params, "strength"), get_number(params, "edge")};
                double cutoff = 0.0;
                if (support) {
                    if (support->lo != p.edge) throw ParseError("band_gap support must start at the edge");
                    cutoff = support->hi;
                } else {
                    cutoff = get_number(params, "cutoff");
                }
                return SpectralDensity::band_gap(p, cutoff);
            }
            case SdKind::tabulated: {
                if (params.contains("file")) {
                    std::filesystem::path file = params.at("file").get<std::string>();
                    if (file.is_relative()) file = base_dir / file;
                    return SpectralDensity::tabulated(read_tabulated_csv(file));
                }
                if (!params.contains("omega") || !params.contains("J")) {
                    throw ParseError("tabulated spectral density needs params.omega and params.J");
                }
                return SpectralDensity::tabulated(TabulatedSD(params.at("omega").get<std::vector<double>>(),
                                                              params.at("J").get<std::vector<double>>()));
            }
            case SdKind::zero: return SpectralDensity::zero();
        }
    } catch (const json::exception& e) {
        throw ParseError(std::string("spectral density: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw ParseError(std::string("spectral density: ") + e.what());
    }
    throw ParseError("unreachable spectral density kind");
}

} // namespace sdprobe::io
