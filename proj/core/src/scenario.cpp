#include "stefanlab/scenario.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace stefanlab {

namespace {

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::vector<double> parse_list(const std::string& s, const std::string& key) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        size_t pos = 0;
        double v = std::stod(item, &pos);
        if (pos != item.size())
            throw std::invalid_argument("scenario: bad number in " + key + ": " + item);
        out.push_back(v);
    }
    return out;
}

double parse_num(const std::string& s, const std::string& key) {
    size_t pos = 0;
    double v = std::stod(s, &pos);
    if (pos != s.size())
        throw std::invalid_argument("scenario: bad number for " + key + ": " + s);
    return v;
}

void validate(const Scenario& sc) {
    if (sc.h <= 0.0) throw std::invalid_argument("scenario: h must be positive");
    if (sc.cfl <= 0.0 || sc.cfl > 0.9)
        throw std::invalid_argument("scenario: cfl outside (0, 0.9]");
    if (sc.t_end <= 0.0) throw std::invalid_argument("scenario: t_end must be positive");
    if (sc.n_snapshots < 2) throw std::invalid_argument("scenario: n_snapshots < 2");
    if (sc.kind == Scenario::Kind::Disk && sc.R <= sc.base_radius)
        throw std::invalid_argument("scenario: R must exceed base_radius");
    if (sc.kind == Scenario::Kind::Slab && sc.slab_profile != "similarity" &&
        sc.slab_profile != "linear")
        throw std::invalid_argument("scenario: slab profile must be similarity or linear");
}

}  // namespace

Scenario parse_scenario(const std::string& text) {
    Scenario sc;
    std::stringstream ss(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw std::invalid_argument("scenario: unterminated section at line " +
                                            std::to_string(lineno));
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("scenario: expected key=value at line " +
                                        std::to_string(lineno));
        std::string key = trim(line.substr(0, eq));
        std::string val = trim(line.substr(eq + 1));
        std::string full = section.empty() ? key : section + "." + key;

        if (full == "name") sc.name = val;
        else if (full == "kind") {
            if (val == "disk") sc.kind = Scenario::Kind::Disk;
            else if (val == "slab") sc.kind = Scenario::Kind::Slab;
            else throw std::invalid_argument("scenario: unknown kind " + val);
        }
        else if (full == "domain.seed") sc.seed = unsigned(parse_num(val, full));
        else if (full == "domain.target_L") sc.target_L = parse_num(val, full);
        else if (full == "domain.r0") sc.r0 = parse_num(val, full);
        else if (full == "domain.base_radius") sc.base_radius = parse_num(val, full);
        else if (full == "domain.R") sc.R = parse_num(val, full);
        else if (full == "domain.n_angles") sc.n_angles = int(parse_num(val, full));
        else if (full == "domain.spike_factor") sc.spike_factor = parse_num(val, full);
        else if (full == "domain.spike_theta") sc.spike_theta = parse_num(val, full);
        else if (full == "domain.spike_width") sc.spike_width = parse_num(val, full);
        else if (full == "slab.length") sc.slab_length = parse_num(val, full);
        else if (full == "slab.ny") sc.slab_ny = int(parse_num(val, full));
        else if (full == "slab.stefan_number") sc.stefan_number = parse_num(val, full);
        else if (full == "slab.t0") sc.slab_t0 = parse_num(val, full);
        else if (full == "slab.profile") sc.slab_profile = val;
        else if (full == "grid.h") sc.h = parse_num(val, full);
        else if (full == "solver.cfl") sc.cfl = parse_num(val, full);
        else if (full == "solver.t_end") sc.t_end = parse_num(val, full);
        else if (full == "solver.n_snapshots") sc.n_snapshots = int(parse_num(val, full));
        else if (full == "solver.snapshot_times") sc.snapshot_times = parse_list(val, full);
        else if (full == "solver.tol") sc.solve_tol = parse_num(val, full);
        else if (full == "analysis.n_probes") sc.n_probes = int(parse_num(val, full));
        else if (full == "analysis.d_ladder") sc.d_ladder = parse_list(val, full);
        else if (full == "analysis.M") sc.M = parse_num(val, full);
        else if (full == "analysis.M_sweep") sc.M_sweep = parse_list(val, full);
        else if (full == "analysis.K1_sweep") sc.K1_sweep = parse_list(val, full);
        else if (full == "analysis.sigma") sc.sigma = parse_num(val, full);
        else if (full == "analysis.r_decomp") sc.r_decomp = parse_num(val, full);
        else if (full == "barriers.enable") sc.barriers_enable = parse_num(val, full) != 0.0;
        else if (full == "barriers.b") sc.barrier_b = parse_num(val, full);
        else if (full == "barriers.r") sc.barrier_r = parse_num(val, full);
        else if (full == "barriers.C_n") sc.C_n = parse_num(val, full);
        else if (full == "barriers.c_neg") sc.c_neg = parse_num(val, full);
        else if (full == "barriers.cap_C2") sc.cap_C2 = parse_num(val, full);
        else if (full == "barriers.cap_C3") sc.cap_C3 = parse_num(val, full);
        else throw std::invalid_argument("scenario: unknown key " + full);
    }
    validate(sc);
    return sc;
}

Scenario read_scenario(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("scenario not found: " + path);
    std::stringstream buf;
    buf << f.rdbuf();
    return parse_scenario(buf.str());
}

void apply_refine(Scenario& sc, int k) {
    if (k < 0) throw std::invalid_argument("apply_refine: negative k");
    for (int i = 0; i < k; ++i) sc.h *= 0.5;
}

}  // namespace stefanlab
