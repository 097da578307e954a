#include "phav/experiment_config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>

#include "phav/error.hpp"

namespace phav {

namespace {

struct KeySpec {
    const char* key;
    const char* description;
};

// Order here is the order printed by experiment_config_schema().
constexpr KeySpec kKeys[] = {
    {"schema_version", "integer, must be 1"},
    {"seed", "unsigned integer RNG root seed (default 0)"},
    {"samples_per_delay", "pulses per delay, >= 1000 (default 100000)"},
    {"bin_width", "histogram bin width in quadrature units (default 0.1)"},
    {"forward_model", "poissonian_phav | gamma_mixed_phav (default poissonian_phav)"},
    {"threads", "worker threads, 0 = PHAV_THREADS or hardware (default 0)"},
    {"phonon.kind", "coherent | thermal | squeezed (default coherent)"},
    {"phonon.beta_re", "displacement, real part (default 2)"},
    {"phonon.beta_im", "displacement, imaginary part (default 0)"},
    {"phonon.n_th", "thermal occupation, phonons (default 0)"},
    {"phonon.zeta_re", "squeezing parameter, real part (default 0)"},
    {"phonon.zeta_im", "squeezing parameter, imaginary part (default 0)"},
    {"phonon.frequency_thz", "phonon frequency Omega/2pi in THz (default 4)"},
    {"phonon.order", "displace_after_squeeze | squeeze_after_displace (default displace_after_squeeze)"},
    {"raman.alpha_y_sq", "residual-polarization photons per pulse (default 2.9)"},
    {"raman.intensity_ratio", "alpha_x^2 / alpha_y^2 (default 100)"},
    {"raman.m_oscillators", "ensemble size M (default 1e6)"},
    {"raman.tau_chi", "coupling; calibrated from raman.modulation_fraction when absent"},
    {"raman.modulation_fraction", "peak-to-peak mean modulation as a fraction of alpha_y^2 (default 0.05)"},
    {"raman.form", "appendix | main_text (default appendix)"},
    {"noise.p2", "detector excess noise, per photon^2 (default 0.002)"},
    {"noise.p1", "detector excess noise, per photon (default 0)"},
    {"noise.p0", "detector excess noise, constant (default 0)"},
    {"delays.start", "first delay in ps (default 0)"},
    {"delays.stop", "last delay in ps (default 2.5)"},
    {"delays.step", "delay step in ps (default 0.0625)"},
    {"tomography.n_max", "Fock truncation, 1..150 (default 150)"},
    {"tomography.iterations", "maximum iterations (default 100)"},
    {"tomography.early_stop_delta", "max |delta p| stop threshold, 0 disables (default 1e-8)"},
    {"tomography.quadrature_support", "largest |x| accepted, quadrature units (default 35)"},
};

struct Entry {
    std::string value;
    std::size_t line = 0;
};

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

// Strips a trailing comment that is not inside quotes.
std::string_view strip_comment(std::string_view s) {
    bool quoted = false;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '"') quoted = !quoted;
        if (s[i] == '#' && !quoted) return s.substr(0, i);
    }
    return s;
}

class Reader {
public:
    Reader(std::map<std::string, Entry> entries, std::string source)
        : entries_(std::move(entries)), source_(std::move(source)) {}

    bool has(const std::string& key) const { return entries_.contains(key); }

    [[noreturn]] void fail(const std::string& key, const std::string& what) const {
        const auto it = entries_.find(key);
        const std::string where = it == entries_.end() ? "" : ":" + std::to_string(it->second.line);
        throw ValidationError(source_ + where + ": " + key + ": " + what);
    }

    std::optional<double> number(const std::string& key) const {
        const auto it = entries_.find(key);
        if (it == entries_.end()) return std::nullopt;
        const std::string& v = it->second.value;
        double out = 0.0;
        const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
        if (ec != std::errc{} || ptr != v.data() + v.size() || !std::isfinite(out)) fail(key, "expected a number, got '" + v + "'");
        return out;
    }

    std::optional<std::uint64_t> unsigned_integer(const std::string& key) const {
        const auto it = entries_.find(key);
        if (it == entries_.end()) return std::nullopt;
        const std::string& v = it->second.value;
        std::uint64_t out = 0;
        const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
        if (ec != std::errc{} || ptr != v.data() + v.size()) {
            // Allow integral values written in exponent form, such as 1e5.
            const auto d = number(key);
            if (*d < 0.0 || *d != std::floor(*d) || *d > 1.8e19) fail(key, "expected a nonnegative integer, got '" + v + "'");
            return static_cast<std::uint64_t>(*d);
        }
        return out;
    }

    std::optional<std::string> text(const std::string& key) const {
        const auto it = entries_.find(key);
        if (it == entries_.end()) return std::nullopt;
        return it->second.value;
    }

private:
    std::map<std::string, Entry> entries_;
    std::string source_;
};

template <class T, class F>
void set_if(std::optional<T> v, F&& f) {
    if (v) f(*v);
}

}  // namespace

ExperimentConfig parse_experiment_config(std::string_view text, const std::string& source) {
    std::map<std::string, Entry> entries;
    std::string section;
    std::size_t lineno = 0;
    std::istringstream in{std::string(text)};
    std::string raw;
    while (std::getline(in, raw)) {
        ++lineno;
        const std::string_view line = trim(strip_comment(raw));
        if (line.empty()) continue;
        const std::string where = source + ":" + std::to_string(lineno) + ": ";
        if (line.front() == '[') {
            if (line.back() != ']') throw ValidationError(where + "malformed section header");
            section = std::string(trim(line.substr(1, line.size() - 2)));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) throw ValidationError(where + "expected 'key = value'");
        std::string key(trim(line.substr(0, eq)));
        std::string_view value = trim(line.substr(eq + 1));
        if (key.empty()) throw ValidationError(where + "empty key");
        if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);
        if (!section.empty()) key = section + "." + key;
        bool known = false;
        for (const auto& k : kKeys) known = known || key == k.key;
        if (!known) throw ValidationError(where + "unknown key '" + key + "'");
        if (entries.contains(key)) throw ValidationError(where + "duplicate key '" + key + "'");
        entries.emplace(key, Entry{std::string(value), lineno});
    }

    const Reader r(std::move(entries), source);
    const auto version = r.unsigned_integer("schema_version");
    if (!version) throw ValidationError(source + ": missing schema_version");
    if (*version != static_cast<std::uint64_t>(kConfigSchemaVersion)) {
        r.fail("schema_version", "unsupported version " + std::to_string(*version));
    }

    ExperimentConfig cfg;
    try {
        set_if(r.unsigned_integer("seed"), [&](auto v) { cfg.seed = v; });
        set_if(r.unsigned_integer("samples_per_delay"), [&](auto v) { cfg.samples_per_delay = v; });
        set_if(r.number("bin_width"), [&](double v) { cfg.bin_width = v; });
        set_if(r.text("forward_model"), [&](const std::string& v) { cfg.forward_model = parse_forward_model(v); });
        set_if(r.unsigned_integer("threads"), [&](auto v) { cfg.threads = static_cast<int>(std::min<std::uint64_t>(v, 1024)); });

        PhononState& ph = cfg.phonon;
        set_if(r.text("phonon.kind"), [&](const std::string& v) { ph.kind = parse_state_kind(v); });
        double beta_re = ph.beta.real();
        double beta_im = ph.beta.imag();
        double zeta_re = 0.0;
        double zeta_im = 0.0;
        set_if(r.number("phonon.beta_re"), [&](double v) { beta_re = v; });
        set_if(r.number("phonon.beta_im"), [&](double v) { beta_im = v; });
        set_if(r.number("phonon.zeta_re"), [&](double v) { zeta_re = v; });
        set_if(r.number("phonon.zeta_im"), [&](double v) { zeta_im = v; });
        ph.beta = complex{beta_re, beta_im};
        ph.zeta = complex{zeta_re, zeta_im};
        set_if(r.number("phonon.n_th"), [&](double v) { ph.n_th = v; });
        set_if(r.number("phonon.frequency_thz"), [&](double v) { ph.omega = 2.0 * std::numbers::pi * v; });
        set_if(r.text("phonon.order"), [&](const std::string& v) {
            if (v == "displace_after_squeeze") ph.order = OperatorOrder::DisplaceAfterSqueeze;
            else if (v == "squeeze_after_displace") ph.order = OperatorOrder::SqueezeAfterDisplace;
            else r.fail("phonon.order", "expected displace_after_squeeze or squeeze_after_displace");
        });
        if (ph.kind != StateKind::Thermal && ph.n_th != 0.0) r.fail("phonon.n_th", "only thermal states take n_th");
        if (ph.kind != StateKind::Squeezed && ph.zeta != complex{}) r.fail("phonon.zeta_re", "only squeezed states take zeta");

        const double alpha_y_sq = r.number("raman.alpha_y_sq").value_or(2.9);
        const double ratio = r.number("raman.intensity_ratio").value_or(100.0);
        const double m = r.number("raman.m_oscillators").value_or(1e6);
        const double fraction = r.number("raman.modulation_fraction").value_or(0.05);
        const RamanForm form = r.text("raman.form") ? parse_raman_form(*r.text("raman.form")) : RamanForm::Appendix;
        double tau_chi = 0.0;
        if (const auto t = r.number("raman.tau_chi")) {
            tau_chi = *t;
        } else {
            if (std::abs(ph.beta) == 0.0) r.fail("raman.tau_chi", "required when the phonon displacement is zero");
            tau_chi = calibrate_coupling(std::abs(ph.beta), std::sqrt(ratio * alpha_y_sq), std::sqrt(alpha_y_sq), m,
                                         fraction, form);
        }
        cfg.raman = RamanParams::from_photons(alpha_y_sq, ratio, tau_chi, m, form);

        set_if(r.number("noise.p2"), [&](double v) { cfg.noise.p2 = v; });
        set_if(r.number("noise.p1"), [&](double v) { cfg.noise.p1 = v; });
        set_if(r.number("noise.p0"), [&](double v) { cfg.noise.p0 = v; });
        set_if(r.number("delays.start"), [&](double v) { cfg.delays.start = v; });
        set_if(r.number("delays.stop"), [&](double v) { cfg.delays.stop = v; });
        set_if(r.number("delays.step"), [&](double v) { cfg.delays.step = v; });
        set_if(r.unsigned_integer("tomography.n_max"), [&](auto v) { cfg.tomography.n_max = static_cast<int>(std::min<std::uint64_t>(v, 100000)); });
        set_if(r.unsigned_integer("tomography.iterations"), [&](auto v) { cfg.tomography.iterations = static_cast<int>(std::min<std::uint64_t>(v, 100000000)); });
        set_if(r.number("tomography.early_stop_delta"), [&](double v) { cfg.tomography.early_stop_delta = v; });
        set_if(r.number("tomography.quadrature_support"), [&](double v) { cfg.tomography.quadrature_support = v; });
        cfg.validate();
    } catch (const ArgumentError& e) {
        throw ValidationError(source + ": " + e.what());
    }
    return cfg;
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError(path.string() + ": cannot open configuration file");
    std::ostringstream text;
    text << in.rdbuf();
    return parse_experiment_config(text.str(), path.string());
}

std::string experiment_config_schema() {
    std::ostringstream os;
    for (const auto& k : kKeys) os << "  " << k.key << ": " << k.description << "\n";
    return os.str();
}

}  // namespace phav
