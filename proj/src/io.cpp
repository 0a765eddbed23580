#include "curvireg/io.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <limits>
#include <sstream>

#include <png.h>
#include <nlohmann/json.hpp>

#include "curvireg/errors.hpp"
#include "curvireg/features.hpp"

using nlohmann::json;

namespace curvireg {

namespace {

void write_floats_bottom_up(std::ofstream& out, const ScalarField& f, int channels,
                            const ScalarField* second) {
    std::vector<float> row(static_cast<size_t>(f.width()) * channels);
    for (int y = f.height() - 1; y >= 0; --y) {
        for (int x = 0; x < f.width(); ++x) {
            row[static_cast<size_t>(x) * channels] = static_cast<float>(f.at(x, y));
            if (channels == 2)
                row[static_cast<size_t>(x) * channels + 1] = static_cast<float>(second->at(x, y));
        }
        out.write(reinterpret_cast<const char*>(row.data()),
                  static_cast<std::streamsize>(row.size() * sizeof(float)));
    }
}

void read_header_token(std::ifstream& in, std::string& token) {
    token.clear();
    char c;
    while (in.get(c)) {
        if (c == '#') {  // comment to end of line
            while (in.get(c) && c != '\n') {
            }
            continue;
        }
        if (std::isspace(static_cast<unsigned char>(c))) {
            if (!token.empty())
                return;
            continue;
        }
        token.push_back(c);
    }
}

struct PfmHeader {
    std::string magic;
    int width = 0;
    int height = 0;
    double scale = -1.0;
};

PfmHeader read_pfm_header(std::ifstream& in, const std::string& path) {
    PfmHeader h;
    std::string tok;
    read_header_token(in, h.magic);
    read_header_token(in, tok);
    h.width = std::atoi(tok.c_str());
    read_header_token(in, tok);
    h.height = std::atoi(tok.c_str());
    read_header_token(in, tok);
    h.scale = std::atof(tok.c_str());
    if (h.width <= 0 || h.height <= 0)
        throw ParseError(path + ": bad PFM extent");
    if (h.scale >= 0.0)
        throw ParseError(path + ": big-endian PFM not supported");
    return h;
}

void read_floats_bottom_up(std::ifstream& in, const std::string& path, ScalarField& f,
                           int channels, ScalarField* second) {
    std::vector<float> row(static_cast<size_t>(f.width()) * channels);
    for (int y = f.height() - 1; y >= 0; --y) {
        in.read(reinterpret_cast<char*>(row.data()),
                static_cast<std::streamsize>(row.size() * sizeof(float)));
        if (!in)
            throw ParseError(path + ": truncated PFM payload");
        for (int x = 0; x < f.width(); ++x) {
            f.at(x, y) = row[static_cast<size_t>(x) * channels];
            if (channels == 2)
                second->at(x, y) = row[static_cast<size_t>(x) * channels + 1];
        }
    }
}

json pose_to_json(const std::string& model, const Viewpoint& vp, const PoseTransform& pose) {
    json j;
    j["model"] = model;
    j["h_deg"] = vp.elevation_deg;
    j["a_deg"] = vp.azimuth_deg;
    j["v_m"] = vp.distance_m;
    std::vector<double> r(9);
    for (int i = 0; i < 3; ++i)
        for (int k = 0; k < 3; ++k)
            r[i * 3 + k] = pose.rotation(i, k);
    j["R"] = r;
    j["t"] = std::vector<double>{pose.translation.x(), pose.translation.y(),
                                 pose.translation.z()};
    return j;
}

std::string doubles_to_b64(const std::vector<double>& v) {
    return base64_encode(reinterpret_cast<const uint8_t*>(v.data()), v.size() * sizeof(double));
}

std::vector<double> b64_to_doubles(const std::string& text, size_t expect) {
    const std::vector<uint8_t> raw = base64_decode(text);
    if (raw.size() != expect * sizeof(double))
        throw ParseError("float blob has wrong length");
    std::vector<double> v(expect);
    std::memcpy(v.data(), raw.data(), raw.size());
    return v;
}

}  // namespace

void write_pfm(const std::string& path, const ScalarField& field) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw IoError("cannot write " + path);
    out << "Pf\n" << field.width() << " " << field.height() << "\n-1.0\n";
    write_floats_bottom_up(out, field, 1, nullptr);
    if (!out)
        throw IoError("short write: " + path);
}

ScalarField read_pfm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open " + path);
    const PfmHeader h = read_pfm_header(in, path);
    if (h.magic != "Pf")
        throw ParseError(path + ": expected grayscale PFM, got '" + h.magic + "'");
    ScalarField f(h.width, h.height);
    read_floats_bottom_up(in, path, f, 1, nullptr);
    return f;
}

void write_pfm2(const std::string& path, const ScalarField& ch0, const ScalarField& ch1) {
    if (!ch0.same_shape(ch1))
        throw ParameterError("write_pfm2: channel shape mismatch");
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw IoError("cannot write " + path);
    out << "PF2\n" << ch0.width() << " " << ch0.height() << "\n-1.0\n";
    write_floats_bottom_up(out, ch0, 2, &ch1);
    if (!out)
        throw IoError("short write: " + path);
}

std::pair<ScalarField, ScalarField> read_pfm2(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open " + path);
    const PfmHeader h = read_pfm_header(in, path);
    if (h.magic != "PF2")
        throw ParseError(path + ": expected two-channel PFM, got '" + h.magic + "'");
    ScalarField a(h.width, h.height), b(h.width, h.height);
    read_floats_bottom_up(in, path, a, 2, &b);
    return {std::move(a), std::move(b)};
}

void write_pgm(const std::string& path, const std::vector<uint8_t>& pixels, int width,
               int height) {
    if (static_cast<size_t>(width) * height != pixels.size())
        throw ParameterError("write_pgm: pixel count mismatch");
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw IoError("cannot write " + path);
    out << "P5\n" << width << " " << height << "\n255\n";
    out.write(reinterpret_cast<const char*>(pixels.data()),
              static_cast<std::streamsize>(pixels.size()));
    if (!out)
        throw IoError("short write: " + path);
}

std::vector<uint8_t> read_pgm(const std::string& path, int& width, int& height) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open " + path);
    std::string magic, tok;
    read_header_token(in, magic);
    if (magic != "P5")
        throw ParseError(path + ": expected binary PGM");
    read_header_token(in, tok);
    width = std::atoi(tok.c_str());
    read_header_token(in, tok);
    height = std::atoi(tok.c_str());
    read_header_token(in, tok);
    const int maxval = std::atoi(tok.c_str());
    if (width <= 0 || height <= 0 || maxval != 255)
        throw ParseError(path + ": unsupported PGM header");
    std::vector<uint8_t> pixels(static_cast<size_t>(width) * height);
    in.read(reinterpret_cast<char*>(pixels.data()),
            static_cast<std::streamsize>(pixels.size()));
    if (!in)
        throw ParseError(path + ": truncated PGM payload");
    return pixels;
}

void write_depth_image(const std::string& pfm_path, const std::string& mask_path,
                       const DepthImage& depth) {
    const int w = depth.depth.width();
    const int h = depth.depth.height();
    ScalarField stored(w, h);
    std::vector<uint8_t> mask(static_cast<size_t>(w) * h);
    const double max_finite = std::numeric_limits<float>::max();
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            const bool bg = depth.is_background(x, y);
            stored.at(x, y) = bg ? max_finite : depth.depth.at(x, y);
            mask[static_cast<size_t>(y) * w + x] = bg ? 0 : 255;
        }
    write_pfm(pfm_path, stored);
    write_pgm(mask_path, mask, w, h);
}

DepthImage read_depth_image(const std::string& pfm_path, const std::string& mask_path) {
    DepthImage img;
    img.depth = read_pfm(pfm_path);
    int w = 0, h = 0;
    const std::vector<uint8_t> mask = read_pgm(mask_path, w, h);
    if (w != img.depth.width() || h != img.depth.height())
        throw ParseError(mask_path + ": mask extent differs from depth");
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            if (mask[static_cast<size_t>(y) * w + x] == 0)
                img.depth.at(x, y) = DepthImage::kBackground;
    return img;
}

namespace {

IntensityImage read_png(const std::string& path) {
    FILE* fp = std::fopen(path.c_str(), "rb");
    if (!fp)
        throw IoError("cannot open " + path);
    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!png || !info) {
        if (png)
            png_destroy_read_struct(&png, &info, nullptr);
        std::fclose(fp);
        throw IoError("libpng initialization failed");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        std::fclose(fp);
        throw ParseError(path + ": libpng decode error");
    }
    png_init_io(png, fp);
    png_read_info(png, info);

    const png_uint_32 w = png_get_image_width(png, info);
    const png_uint_32 h = png_get_image_height(png, info);
    const int bit_depth = png_get_bit_depth(png, info);
    const int color = png_get_color_type(png, info);

    if (color == PNG_COLOR_TYPE_PALETTE)
        png_set_palette_to_rgb(png);
    if (color == PNG_COLOR_TYPE_GRAY && bit_depth < 8)
        png_set_expand_gray_1_2_4_to_8(png);
    if (png_get_valid(png, info, PNG_INFO_tRNS))
        png_set_tRNS_to_alpha(png);
    png_set_strip_alpha(png);
    if (bit_depth == 16)
        png_set_swap(png);  // little-endian words for direct reads
    png_read_update_info(png, info);

    const int channels = png_get_channels(png, info);
    const size_t row_bytes = png_get_rowbytes(png, info);
    std::vector<uint8_t> raw(row_bytes * h);
    std::vector<png_bytep> rows(h);
    for (png_uint_32 y = 0; y < h; ++y)
        rows[y] = raw.data() + y * row_bytes;
    png_read_image(png, rows.data());
    png_destroy_read_struct(&png, &info, nullptr);
    std::fclose(fp);

    IntensityImage img;
    img.bit_depth = bit_depth >= 16 ? 16 : 8;
    img.values = ScalarField(static_cast<int>(w), static_cast<int>(h));
    const double denom = (img.bit_depth == 16) ? 65535.0 : 255.0;
    for (png_uint_32 y = 0; y < h; ++y) {
        for (png_uint_32 x = 0; x < w; ++x) {
            double v = 0.0;
            if (img.bit_depth == 16) {
                const uint16_t* px = reinterpret_cast<const uint16_t*>(rows[y]) +
                                     static_cast<size_t>(x) * channels;
                v = (channels >= 3) ? 0.299 * px[0] + 0.587 * px[1] + 0.114 * px[2] : px[0];
            } else {
                const uint8_t* px = rows[y] + static_cast<size_t>(x) * channels;
                v = (channels >= 3) ? 0.299 * px[0] + 0.587 * px[1] + 0.114 * px[2] : px[0];
            }
            img.values.at(static_cast<int>(x), static_cast<int>(y)) = v / denom;
        }
    }
    return img;
}

IntensityImage read_pnm_intensity(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open " + path);
    std::string magic, tok;
    read_header_token(in, magic);
    if (magic != "P5" && magic != "P6")
        throw ParseError(path + ": expected binary PGM/PPM");
    read_header_token(in, tok);
    const int w = std::atoi(tok.c_str());
    read_header_token(in, tok);
    const int h = std::atoi(tok.c_str());
    read_header_token(in, tok);
    const int maxval = std::atoi(tok.c_str());
    if (w <= 0 || h <= 0 || maxval <= 0 || maxval > 65535)
        throw ParseError(path + ": unsupported PNM header");
    const int channels = (magic == "P6") ? 3 : 1;
    const int bytes = (maxval > 255) ? 2 : 1;
    std::vector<uint8_t> raw(static_cast<size_t>(w) * h * channels * bytes);
    in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
    if (!in)
        throw ParseError(path + ": truncated PNM payload");

    IntensityImage img;
    img.bit_depth = (maxval > 255) ? 16 : 8;
    img.values = ScalarField(w, h);
    auto fetch = [&](size_t i) -> double {
        if (bytes == 1)
            return raw[i];
        return raw[2 * i] * 256.0 + raw[2 * i + 1];  // PNM 16-bit is big-endian
    };
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            const size_t i = (static_cast<size_t>(y) * w + x) * channels;
            const double v = (channels == 3)
                                 ? 0.299 * fetch(i) + 0.587 * fetch(i + 1) + 0.114 * fetch(i + 2)
                                 : fetch(i);
            img.values.at(x, y) = v / maxval;
        }
    return img;
}

}  // namespace

IntensityImage read_intensity_image(const std::string& path) {
    std::ifstream probe(path, std::ios::binary);
    if (!probe)
        throw IoError("cannot open " + path);
    uint8_t sig[2] = {0, 0};
    probe.read(reinterpret_cast<char*>(sig), 2);
    probe.close();
    if (sig[0] == 0x89 && sig[1] == 'P')
        return read_png(path);
    if (sig[0] == 'P' && (sig[1] == '5' || sig[1] == '6'))
        return read_pnm_intensity(path);
    throw ParseError(path + ": unrecognized image format (PNG/PGM/PPM supported)");
}

void write_png_rgb(const std::string& path, const RgbImage& image) {
    FILE* fp = std::fopen(path.c_str(), "wb");
    if (!fp)
        throw IoError("cannot write " + path);
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!png || !info) {
        if (png)
            png_destroy_write_struct(&png, &info);
        std::fclose(fp);
        throw IoError("libpng initialization failed");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        std::fclose(fp);
        throw IoError(path + ": libpng encode error");
    }
    png_init_io(png, fp);
    png_set_IHDR(png, info, image.width, image.height, 8, PNG_COLOR_TYPE_RGB,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    std::vector<png_bytep> rows(image.height);
    for (int y = 0; y < image.height; ++y)
        rows[y] = const_cast<uint8_t*>(image.pixels.data()) +
                  static_cast<size_t>(y) * image.width * 3;
    png_write_image(png, rows.data());
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
    std::fclose(fp);
}

void write_saliency(const std::string& base_path, const SaliencyMap& map) {
    write_pfm(base_path + "_value.pfm", map.value);
    write_pfm2(base_path + "_orient.pfm", map.orient_x, map.orient_y);
    write_pgm(base_path + "_mask.pgm",
              [&] {
                  std::vector<uint8_t> m(map.mask.size());
                  for (size_t i = 0; i < m.size(); ++i)
                      m[i] = map.mask[i] ? 255 : 0;
                  return m;
              }(),
              map.width(), map.height());
    json j;
    j["width"] = map.width();
    j["height"] = map.height();
    j["value"] = base_path + "_value.pfm";
    j["orient"] = base_path + "_orient.pfm";
    j["mask"] = base_path + "_mask.pgm";
    write_text_file(base_path + ".json", j.dump(2) + "\n");
}

SaliencyMap read_saliency(const std::string& base_path) {
    const json j = json::parse(read_text_file(base_path + ".json"));
    SaliencyMap map(j.at("width").get<int>(), j.at("height").get<int>());
    map.value = read_pfm(j.at("value").get<std::string>());
    auto [ox, oy] = read_pfm2(j.at("orient").get<std::string>());
    map.orient_x = std::move(ox);
    map.orient_y = std::move(oy);
    int w = 0, h = 0;
    const auto mask = read_pgm(j.at("mask").get<std::string>(), w, h);
    for (size_t i = 0; i < map.mask.size(); ++i)
        map.mask[i] = mask[i] ? 1 : 0;
    return map;
}

std::string pose_record_json(const std::string& model, const Viewpoint& vp,
                             const PoseTransform& pose) {
    return pose_to_json(model, vp, pose).dump(2) + "\n";
}

void write_descriptor_json(const std::string& path, const HogDescriptor& desc,
                           const std::vector<FeaturePoint>& points) {
    json j;
    j["source"] = desc.source;
    j["size"] = desc.data.size();
    j["data_b64"] = doubles_to_b64(desc.data);
    std::vector<double> flat;
    flat.reserve(points.size() * 3);
    for (const auto& p : points) {
        flat.push_back(p.x);
        flat.push_back(p.y);
        flat.push_back(p.weight);
    }
    j["points_b64"] = doubles_to_b64(flat);
    j["point_count"] = points.size();
    write_text_file(path, j.dump(2) + "\n");
}

void read_descriptor_json(const std::string& path, HogDescriptor& desc,
                          std::vector<FeaturePoint>& points) {
    const json j = json::parse(read_text_file(path));
    const size_t n = j.at("size").get<size_t>();
    desc.data = b64_to_doubles(j.at("data_b64").get<std::string>(), n);
    desc.source = j.at("source").get<std::string>();
    const size_t pc = j.at("point_count").get<size_t>();
    const std::vector<double> flat = b64_to_doubles(j.at("points_b64").get<std::string>(), pc * 3);
    points.resize(pc);
    for (size_t i = 0; i < pc; ++i)
        points[i] = {flat[3 * i], flat[3 * i + 1], flat[3 * i + 2]};
}

void write_stats_json(const std::string& path, const DescriptorStats& stats) {
    const int d = static_cast<int>(stats.mu.size());
    std::vector<double> mu(stats.mu.data(), stats.mu.data() + d);
    std::vector<double> sigma(static_cast<size_t>(d) * d);
    for (int i = 0; i < d; ++i)
        for (int k = 0; k < d; ++k)
            sigma[static_cast<size_t>(i) * d + k] = stats.sigma(i, k);
    json j;
    j["dim"] = d;
    j["lambda_reg"] = stats.lambda_reg;
    j["mu_b64"] = doubles_to_b64(mu);
    j["sigma_b64"] = doubles_to_b64(sigma);
    write_text_file(path, j.dump() + "\n");
}

DescriptorStats read_stats_json(const std::string& path) {
    const json j = json::parse(read_text_file(path));
    const int d = j.at("dim").get<int>();
    DescriptorStats stats;
    stats.lambda_reg = j.at("lambda_reg").get<double>();
    const auto mu = b64_to_doubles(j.at("mu_b64").get<std::string>(), d);
    const auto sigma = b64_to_doubles(j.at("sigma_b64").get<std::string>(),
                                      static_cast<size_t>(d) * d);
    stats.mu = Eigen::Map<const Eigen::VectorXd>(mu.data(), d);
    stats.sigma = Eigen::Map<const Eigen::MatrixXd>(sigma.data(), d, d);
    // Row-major blob into column-major matrix: sigma is symmetric so the
    // layouts coincide, but keep the transpose for byte-exact round trips.
    stats.sigma.transposeInPlace();
    stats.refactor();
    return stats;
}

namespace {
constexpr char kB64Alphabet[] =
    "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";
}

std::string base64_encode(const uint8_t* data, size_t len) {
    std::string out;
    out.reserve((len + 2) / 3 * 4);
    for (size_t i = 0; i < len; i += 3) {
        uint32_t chunk = static_cast<uint32_t>(data[i]) << 16;
        if (i + 1 < len)
            chunk |= static_cast<uint32_t>(data[i + 1]) << 8;
        if (i + 2 < len)
            chunk |= data[i + 2];
        out.push_back(kB64Alphabet[(chunk >> 18) & 63]);
        out.push_back(kB64Alphabet[(chunk >> 12) & 63]);
        out.push_back(i + 1 < len ? kB64Alphabet[(chunk >> 6) & 63] : '=');
        out.push_back(i + 2 < len ? kB64Alphabet[chunk & 63] : '=');
    }
    return out;
}

std::vector<uint8_t> base64_decode(const std::string& text) {
    std::array<int8_t, 256> lut;
    lut.fill(-1);
    for (int i = 0; i < 64; ++i)
        lut[static_cast<uint8_t>(kB64Alphabet[i])] = static_cast<int8_t>(i);
    std::vector<uint8_t> out;
    out.reserve(text.size() / 4 * 3);
    uint32_t chunk = 0;
    int bits = 0;
    for (char c : text) {
        if (c == '=' || c == '\n' || c == '\r')
            continue;
        const int8_t v = lut[static_cast<uint8_t>(c)];
        if (v < 0)
            throw ParseError("invalid base64 character");
        chunk = (chunk << 6) | static_cast<uint32_t>(v);
        bits += 6;
        if (bits >= 8) {
            bits -= 8;
            out.push_back(static_cast<uint8_t>((chunk >> bits) & 0xff));
        }
    }
    return out;
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw IoError("cannot write " + path);
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out)
        throw IoError("short write: " + path);
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace curvireg
