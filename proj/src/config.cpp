#include "curvireg/config.hpp"

#include <fstream>
#include <sstream>

#include "curvireg/errors.hpp"

namespace curvireg {

namespace {

double to_double(const std::string& key, const std::string& v) {
    try {
        size_t pos = 0;
        const double d = std::stod(v, &pos);
        if (pos != v.size())
            throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        throw ParameterError("config: bad numeric value for " + key + ": '" + v + "'");
    }
}

int to_int(const std::string& key, const std::string& v) {
    const double d = to_double(key, v);
    const int i = static_cast<int>(d);
    if (static_cast<double>(i) != d)
        throw ParameterError("config: expected integer for " + key + ": '" + v + "'");
    return i;
}

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r");
    size_t e = s.find_last_not_of(" \t\r");
    if (b == std::string::npos)
        return "";
    return s.substr(b, e - b + 1);
}

}  // namespace

void Config::set(const std::string& key, const std::string& value) {
    if (key == "render.image_size") image_size = to_int(key, value);
    else if (key == "render.fill_fraction") fill_fraction = to_double(key, value);
    else if (key == "render.pixel_scale") pixel_scale = to_double(key, value);
    else if (key == "grid.h_step") h_step_deg = to_double(key, value);
    else if (key == "grid.a_step") a_step_deg = to_double(key, value);
    else if (key == "grid.v_min") v_min_m = to_double(key, value);
    else if (key == "grid.v_max") v_max_m = to_double(key, value);
    else if (key == "grid.v_step") v_step_m = to_double(key, value);
    else if (key == "detect.sigma") detect_sigma = to_double(key, value);
    else if (key == "detect.scales") scales = to_int(key, value);
    else if (key == "mcs.iterations") diffusion_iterations = to_int(key, value);
    else if (key == "mcs.kappa_fraction") kappa_fraction = to_double(key, value);
    else if (key == "mfc.base_sigma") mfc_base_sigma = to_double(key, value);
    else if (key == "mfc.propagate_radius") mfc_propagate_radius = to_double(key, value);
    else if (key == "hog.epsilon") hog_epsilon = to_double(key, value);
    else if (key == "hog.resize") hog_resize = to_int(key, value);
    else if (key == "register.eps_px") eps_px = to_double(key, value);
    else if (key == "register.percentile") percentile = to_double(key, value);
    else if (key == "register.sigma_r") sigma_r = to_double(key, value);
    else if (key == "register.top_k") top_k = to_int(key, value);
    else if (key == "register.step_h") step_h_deg = to_double(key, value);
    else if (key == "register.step_a") step_a_deg = to_double(key, value);
    else if (key == "register.step_v") step_v_m = to_double(key, value);
    else if (key == "register.epsilon") epsilon = to_double(key, value);
    else if (key == "register.max_rounds") max_rounds = to_int(key, value);
    else if (key == "register.detector") detector = value;
    else throw ParameterError("config: unknown key '" + key + "'");
}

void Config::load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open config file: " + path);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const size_t hash = line.find('#');
        if (hash != std::string::npos)
            line.resize(hash);
        const std::string t = trim(line);
        if (t.empty())
            continue;
        const size_t eq = t.find('=');
        if (eq == std::string::npos)
            throw ParseError(path + ":" + std::to_string(line_no) + ": expected key = value");
        set(trim(t.substr(0, eq)), trim(t.substr(eq + 1)));
    }
}

void Config::validate() const {
    if (image_size < 16)
        throw ParameterError("config: render.image_size too small");
    if (fill_fraction <= 0.0 || fill_fraction > 1.0)
        throw ParameterError("config: render.fill_fraction must be in (0,1]");
    if (h_step_deg <= 0.0 || a_step_deg <= 0.0 || v_step_m <= 0.0)
        throw ParameterError("config: grid steps must be positive");
    if (v_min_m <= 0.0 || v_min_m > v_max_m)
        throw ParameterError("config: need 0 < grid.v_min <= grid.v_max");
    if (detect_sigma < 0.0)
        throw ParameterError("config: detect.sigma must be non-negative");
    if (scales < 2)
        throw ParameterError("config: detect.scales must be >= 2");
    if (eps_px < 0.0)
        throw ParameterError("config: register.eps_px must be non-negative");
    if (percentile < 0.0 || percentile > 100.0)
        throw ParameterError("config: register.percentile out of range");
    if (sigma_r <= 0.0)
        throw ParameterError("config: register.sigma_r must be positive");
    if (top_k < 1)
        throw ParameterError("config: register.top_k must be >= 1");
    if (epsilon <= 0.0)
        throw ParameterError("config: register.epsilon must be positive");
    if (max_rounds < 1)
        throw ParameterError("config: register.max_rounds must be >= 1");
    if (detector != "cs" && detector != "mcs" && detector != "mfc")
        throw ParameterError("config: register.detector must be cs, mcs or mfc");
}

PipelineParams Config::pipeline() const {
    PipelineParams p;
    p.image_size = image_size;
    p.pixel_scale = pixel_scale;
    p.fill_fraction = fill_fraction;
    p.detect_sigma = detect_sigma;
    p.percentile = percentile;
    p.eps_px = eps_px;
    p.sigma_r = sigma_r;
    p.top_k = top_k;
    p.hog.resize_to = hog_resize;
    p.hog.cell_epsilon = hog_epsilon;
    p.step_h_deg = step_h_deg;
    p.step_a_deg = step_a_deg;
    p.step_v_m = step_v_m;
    p.epsilon = epsilon;
    p.max_rounds = max_rounds;
    p.coarse_h_deg = h_step_deg;
    p.coarse_a_deg = a_step_deg;
    p.coarse_v_m = v_step_m;
    return p;
}

McsParams Config::mcs() const {
    McsParams m;
    m.sigma = detect_sigma;
    m.diffusion_iterations = diffusion_iterations;
    m.kappa_fraction = kappa_fraction;
    return m;
}

MfcParams Config::mfc() const {
    MfcParams m;
    m.base_sigma = mfc_base_sigma;
    m.orient_sigma = detect_sigma;
    m.propagate_radius = mfc_propagate_radius;
    return m;
}

}  // namespace curvireg
