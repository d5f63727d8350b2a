#include "qnslab/config.hpp"

#include <fstream>
#include <sstream>

namespace qnslab {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

}  // namespace

void ExperimentConfig::validate() const {
    TorusGrid probe(n, N, L);  // revalidates grid constraints
    FracParams fp(alpha, beta, beta >= 1.0);
    (void)probe;
    (void)fp;
    require(T > 0.0, "config: params.T must be positive");
    require(count >= 1, "config: family.count must be >= 1");
    require(spectrum_slope > 0.0, "config: family.spectrum_slope must be positive");
    for (const auto& f : formats)
        require(f == "json" || f == "csv" || f == "svg", "config: output.formats must be json, csv or svg");
}

ExperimentConfig parse_config_text(const std::string& text) {
    ExperimentConfig cfg;
    std::istringstream in(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            require(line.back() == ']', "config: malformed section at line " + std::to_string(lineno));
            section = trim(line.substr(1, line.size() - 2));
            require(section == "grid" || section == "params" || section == "family" ||
                        section == "suite" || section == "output",
                    "config: unknown section [" + section + "]");
            continue;
        }
        auto eq = line.find('=');
        require(eq != std::string::npos, "config: expected key=value at line " + std::to_string(lineno));
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        require(!section.empty(), "config: key outside any section at line " + std::to_string(lineno));

        auto as_double = [&]() { return std::stod(value); };
        auto as_int = [&]() { return std::stol(value); };

        if (section == "grid") {
            if (key == "n") cfg.n = static_cast<int>(as_int());
            else if (key == "N") cfg.N = static_cast<std::size_t>(as_int());
            else if (key == "L") cfg.L = as_double();
            else require(false, "config: unknown key grid." + key);
        } else if (section == "params") {
            if (key == "alpha") cfg.alpha = as_double();
            else if (key == "beta") cfg.beta = as_double();
            else if (key == "T") cfg.T = as_double();
            else require(false, "config: unknown key params." + key);
        } else if (section == "family") {
            if (key == "seed") cfg.seed = static_cast<std::uint64_t>(std::stoull(value));
            else if (key == "count") cfg.count = static_cast<int>(as_int());
            else if (key == "spectrum_slope") cfg.spectrum_slope = as_double();
            else if (key == "divergence_free") cfg.divergence_free = (value == "true" || value == "1");
            else require(false, "config: unknown key family." + key);
        } else if (section == "suite") {
            if (key == "name") cfg.suite_name = value;
            else if (key == "tolerances") {
                for (const auto& item : split_list(value)) {
                    auto c = item.find(':');
                    require(c != std::string::npos, "config: suite.tolerances entries are name:value");
                    cfg.tolerances[trim(item.substr(0, c))] = std::stod(item.substr(c + 1));
                }
            } else
                require(false, "config: unknown key suite." + key);
        } else if (section == "output") {
            if (key == "dir") cfg.out_dir = value;
            else if (key == "formats") cfg.formats = split_list(value);
            else require(false, "config: unknown key output." + key);
        }
    }
    cfg.validate();
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    require(static_cast<bool>(in), "config: cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

}  // namespace qnslab
