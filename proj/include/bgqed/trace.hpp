#pragma once

#include <cmath>
#include <complex>
#include <fstream>
#include <iomanip>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "errors.hpp"

namespace bgqed {

using cplx = std::complex<double>;

// Frequency grid with complex amplitudes and a free-form string map for
// bookkeeping (method, normalisation, warnings).
struct SpectrumTrace {
    std::vector<double> freqs;   // GHz
    std::vector<cplx> values;    // S21 (or transmission amplitude)
    std::map<std::string, std::string> meta;

    std::size_t size() const { return freqs.size(); }

    void validate() const {
        if (values.size() != freqs.size())
            throw InvalidArgument("SpectrumTrace: values and freqs differ in length");
        for (std::size_t i = 1; i < freqs.size(); ++i)
            if (!(freqs[i] > freqs[i - 1]))
                throw InvalidArgument("SpectrumTrace: freqs not strictly increasing at index " +
                                      std::to_string(i));
    }

    std::vector<double> magnitude() const {
        std::vector<double> m(values.size());
        for (std::size_t i = 0; i < values.size(); ++i) m[i] = std::abs(values[i]);
        return m;
    }

    // 20 log10 |S21|; zero amplitude maps to -400 dB rather than -inf.
    std::vector<double> mag_db() const {
        std::vector<double> m(values.size());
        for (std::size_t i = 0; i < values.size(); ++i) m[i] = to_db(values[i]);
        return m;
    }

    static double to_db(cplx v) {
        double a = std::abs(v);
        return a > 0.0 ? 20.0 * std::log10(a) : -400.0;
    }
};

inline std::string format_double(double x) {
    std::ostringstream os;
    os << std::setprecision(std::numeric_limits<double>::max_digits10) << x;
    return os.str();
}

inline void write_csv(std::ostream& os, const SpectrumTrace& t) {
    t.validate();
    os << "freq_ghz,re,im,mag_db\n";
    for (std::size_t i = 0; i < t.size(); ++i)
        os << format_double(t.freqs[i]) << ',' << format_double(t.values[i].real()) << ','
           << format_double(t.values[i].imag()) << ',' << format_double(SpectrumTrace::to_db(t.values[i]))
           << '\n';
}

// Reads freq_ghz plus either (re, im) or mag_db columns. Phase is lost in
// the mag_db-only case, which is all the fitting stages need.
inline SpectrumTrace read_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw ConfigError("trace csv: empty input");
    std::vector<std::string> cols;
    {
        std::stringstream ss(line);
        std::string c;
        while (std::getline(ss, c, ',')) {
            while (!c.empty() && (c.back() == '\r' || c.back() == ' ')) c.pop_back();
            cols.push_back(c);
        }
    }
    auto find = [&](const std::string& name) {
        for (std::size_t i = 0; i < cols.size(); ++i)
            if (cols[i] == name) return static_cast<int>(i);
        return -1;
    };
    int fi = find("freq_ghz"), ri = find("re"), ii = find("im"), di = find("mag_db");
    if (fi < 0) throw ConfigError("trace csv: missing freq_ghz column");
    if ((ri < 0 || ii < 0) && di < 0) throw ConfigError("trace csv: need re,im or mag_db columns");
    SpectrumTrace t;
    int lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty() || line == "\r") continue;
        std::vector<double> v;
        std::stringstream ss(line);
        std::string c;
        while (std::getline(ss, c, ',')) {
            try {
                v.push_back(std::stod(c));
            } catch (...) {
                throw ConfigError("trace csv: line " + std::to_string(lineno) + ": bad number '" + c + "'");
            }
        }
        if (v.size() < cols.size())
            throw ConfigError("trace csv: line " + std::to_string(lineno) + ": too few fields");
        t.freqs.push_back(v[fi]);
        if (ri >= 0 && ii >= 0) t.values.emplace_back(v[ri], v[ii]);
        else t.values.emplace_back(std::pow(10.0, v[di] / 20.0), 0.0);
    }
    t.validate();
    return t;
}

inline nlohmann::ordered_json to_json(const SpectrumTrace& t) {
    t.validate();
    nlohmann::ordered_json j;
    std::vector<double> re, im;
    for (auto v : t.values) {
        re.push_back(v.real());
        im.push_back(v.imag());
    }
    j["freq_ghz"] = t.freqs;
    j["re"] = re;
    j["im"] = im;
    j["mag_db"] = t.mag_db();
    nlohmann::ordered_json meta = nlohmann::ordered_json::object();
    for (const auto& [k, v] : t.meta) meta[k] = v;
    j["meta"] = meta;
    return j;
}

inline SpectrumTrace trace_from_json(const nlohmann::ordered_json& j) {
    SpectrumTrace t;
    try {
        t.freqs = j.at("freq_ghz").get<std::vector<double>>();
        auto re = j.at("re").get<std::vector<double>>();
        auto im = j.at("im").get<std::vector<double>>();
        if (re.size() != im.size()) throw ConfigError("trace json: re/im length mismatch");
        for (std::size_t i = 0; i < re.size(); ++i) t.values.emplace_back(re[i], im[i]);
        if (j.contains("meta"))
            for (auto& [k, v] : j.at("meta").items()) t.meta[k] = v.get<std::string>();
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("trace json: ") + e.what());
    }
    t.validate();
    return t;
}

} // namespace bgqed
