// Copyright (c) 2026 The kinetic authors
// SPDX-License-Identifier: Apache-2.0
//
// Flat parameter files: one `key = value` or `key: value` per line, `#`
// starts a comment. Either the rate keys (lambda, mu, D, v, t) or the
// engineering keys (Pe, Da_I, t_star, R, L, v) describe the model; when both
// appear the engineering set wins.
#pragma once

#include <cstddef>
#include <cmath>
#include <exception>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>

#include "core.hpp"

namespace kinetic {

struct ParameterSet {
    std::map<std::string, double> values;

    bool has(const std::string& k) const { return values.count(k) != 0; }
    std::optional<double> get(const std::string& k) const
    {
        auto it = values.find(k);
        if (it == values.end())
            return std::nullopt;
        return it->second;
    }
    void set(const std::string& k, double v) { values[k] = v; }

    bool engineering() const
    {
        for (const char* k : {"Pe", "Da_I", "t_star", "R", "L"})
            if (has(k))
                return true;
        return false;
    }
};

namespace detail {

inline std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

inline const std::set<std::string>& known_keys()
{
    static const std::set<std::string> keys{"lambda", "mu", "D", "v", "iota_F", "t", "n",
                                            "Pe", "Da_I", "t_star", "R", "L"};
    return keys;
}

}  // namespace detail

inline ParameterSet parse_parameters(std::istream& in)
{
    ParameterSet ps;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto c = line.find('#'); c != std::string::npos)
            line.erase(c);
        line = detail::trim(line);
        if (line.empty())
            continue;
        auto sep = line.find_first_of("=:");
        if (sep == std::string::npos)
            throw ParameterError("line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = detail::trim(line.substr(0, sep));
        const std::string text = detail::trim(line.substr(sep + 1));
        if (!detail::known_keys().count(key))
            throw ParameterError("line " + std::to_string(lineno) + ": unknown key '" + key + "'");
        std::size_t used = 0;
        double value = 0;
        try {
            value = std::stod(text, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != text.size())
            throw ParameterError("line " + std::to_string(lineno) + ": bad number '" + text + "'");
        ps.set(key, value);
    }
    return ps;
}

inline ParameterSet parse_parameters(const std::string& text)
{
    std::istringstream in(text);
    return parse_parameters(in);
}

inline ParameterSet load_parameters(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ParameterError("cannot open parameter file '" + path + "'");
    return parse_parameters(in);
}

struct ResolvedParameters {
    KineticParams params;
    double t;
    InitialDistribution iota;
    std::optional<std::size_t> n;
};

/// Builds the model; a missing key is a ParameterError naming it.
inline ResolvedParameters resolve(const ParameterSet& ps)
{
    auto need = [&](const char* k) {
        auto v = ps.get(k);
        if (!v)
            throw ParameterError(std::string("missing parameter '") + k + "'");
        return *v;
    };
    const InitialDistribution iota(ps.get("iota_F").value_or(1.0));
    std::optional<std::size_t> n;
    if (auto nv = ps.get("n")) {
        if (!(*nv >= 1) || *nv != std::floor(*nv))
            throw ParameterError("n must be a positive integer");
        n = static_cast<std::size_t>(*nv);
    }
    if (ps.engineering()) {
        EngineeringParams ep{need("Pe"), need("Da_I"), need("t_star"), need("R"),
                             need("L"), ps.get("v").value_or(1.0)};
        ep.validate();
        TranslatedParams tp = translate_engineering(ep);
        return {tp.params, tp.t, iota, n};
    }
    return {KineticParams(need("lambda"), need("mu"), need("D"), need("v")), need("t"), iota, n};
}

}  // namespace kinetic
