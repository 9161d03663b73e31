#include "diffusym/specfile.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

namespace diffusym {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

double to_number(const std::string& key, const std::string& value) {
    char* end = nullptr;
    const double v = std::strtod(value.c_str(), &end);
    if (end == value.c_str() || *end != '\0')
        throw SpecError("spec file: key '" + key + "' expects a number, got '" + value + "'");
    return v;
}

} // namespace

PdeSpec parse_pde_spec_text(const std::string& text, const std::string& origin) {
    std::map<std::string, std::map<std::string, std::string>> sections;
    std::string current;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string s = trim(line);
        if (s.empty() || s[0] == '#' || s[0] == ';') continue;
        if (s.front() == '[') {
            if (s.back() != ']')
                throw SpecError(origin + ":" + std::to_string(lineno) + ": malformed section");
            current = trim(s.substr(1, s.size() - 2));
            sections[current];
            continue;
        }
        const auto eq = s.find('=');
        if (eq == std::string::npos)
            throw SpecError(origin + ":" + std::to_string(lineno) + ": expected key = value");
        if (current.empty())
            throw SpecError(origin + ":" + std::to_string(lineno) + ": key outside a section");
        const std::string key = trim(s.substr(0, eq));
        const std::string value = trim(s.substr(eq + 1));
        if (!sections[current].emplace(key, value).second)
            throw SpecError(origin + ":" + std::to_string(lineno) + ": duplicate key '" + key +
                            "'");
    }

    if (!sections.count("pde")) throw SpecError(origin + ": missing [pde] section");
    auto& pde = sections["pde"];
    for (const char* key : {"a", "b", "c"})
        if (!pde.count(key))
            throw SpecError(origin + ": [pde] must define a, b and c");

    PdeSpec spec;
    spec.raw = sections;

    ParamEnv env;
    if (sections.count("params"))
        for (const auto& [key, value] : sections["params"]) env.bind(key, to_number(key, value));

    try {
        spec.coeffs = CoefficientSet::parse(pde["a"], pde["b"], pde["c"], env);
    } catch (const ParseError& e) {
        throw SpecError(origin + ": [pde] expression error: " + e.what());
    }

    if (!sections.count("domain")) throw SpecError(origin + ": missing [domain] section");
    auto& dom = sections["domain"];
    auto need = [&](const char* key) {
        if (!dom.count(key))
            throw SpecError(origin + ": [domain] must define " + std::string(key));
        return to_number(key, dom[key]);
    };
    spec.domain.x_min = need("x_min");
    spec.domain.x_max = need("x_max");
    spec.domain.t_min = need("t_min");
    spec.domain.t_max = need("t_max");
    if (dom.count("x0")) spec.domain.x0 = to_number("x0", dom["x0"]);
    if (dom.count("nx")) spec.domain.nx = static_cast<int>(to_number("nx", dom["nx"]));
    if (dom.count("nt")) spec.domain.nt = static_cast<int>(to_number("nt", dom["nt"]));
    if (dom.count("margin")) spec.domain.margin = to_number("margin", dom["margin"]);
    spec.domain.validate();

    if (sections.count("options")) {
        auto& opt = sections["options"];
        if (opt.count("fit_tol"))
            spec.classify_options.tol = to_number("fit_tol", opt["fit_tol"]);
        if (opt.count("mu_tol"))
            spec.classify_options.mu_tol = to_number("mu_tol", opt["mu_tol"]);
    }

    if (sections.count("verify")) {
        for (const auto& [key, value] : sections["verify"]) {
            if (key == "entry")
                spec.verify_entry = value;
            else
                spec.verify_params[key] = to_number(key, value);
        }
    }
    return spec;
}

PdeSpec load_pde_spec(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SpecError("cannot open spec file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_pde_spec_text(buf.str(), path);
}

} // namespace diffusym
