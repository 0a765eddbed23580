#ifndef CURVIREG_IO_HPP
#define CURVIREG_IO_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "curvireg/depth_render.hpp"
#include "curvireg/descriptor.hpp"
#include "curvireg/features.hpp"
#include "curvireg/saliency.hpp"
#include "curvireg/saliency_image.hpp"
#include "curvireg/viewpoint.hpp"

namespace curvireg {

// --- Portable float maps -------------------------------------------------
// Grayscale "Pf", little-endian (scale -1.0), rows bottom-up. The two-channel
// orientation variant uses the "PF2" magic with the same layout.

void write_pfm(const std::string& path, const ScalarField& field);
ScalarField read_pfm(const std::string& path);

void write_pfm2(const std::string& path, const ScalarField& ch0, const ScalarField& ch1);
std::pair<ScalarField, ScalarField> read_pfm2(const std::string& path);

// --- PGM / PPM ------------------------------------------------------------

void write_pgm(const std::string& path, const std::vector<uint8_t>& pixels, int width,
               int height);
std::vector<uint8_t> read_pgm(const std::string& path, int& width, int& height);

// --- Depth images with background sentinel --------------------------------
// The PFM stores background as the largest finite float; the companion PGM
// mask (255 = foreground) restores the sentinel on load.

void write_depth_image(const std::string& pfm_path, const std::string& mask_path,
                       const DepthImage& depth);
DepthImage read_depth_image(const std::string& pfm_path, const std::string& mask_path);

// --- Photographs -----------------------------------------------------------
// PNG (8/16-bit gray or color, via libpng) and PGM/PPM input; color collapses
// to Rec. 601 luminance.

IntensityImage read_intensity_image(const std::string& path);

struct RgbImage {
    int width = 0, height = 0;
    std::vector<uint8_t> pixels;  // rgb, row-major
};
void write_png_rgb(const std::string& path, const RgbImage& image);

// --- Saliency maps ----------------------------------------------------------

void write_saliency(const std::string& base_path, const SaliencyMap& map);
SaliencyMap read_saliency(const std::string& base_path);

// --- JSON records ------------------------------------------------------------

std::string pose_record_json(const std::string& model, const Viewpoint& vp,
                             const PoseTransform& pose);

void write_descriptor_json(const std::string& path, const HogDescriptor& desc,
                           const std::vector<FeaturePoint>& points);
void read_descriptor_json(const std::string& path, HogDescriptor& desc,
                          std::vector<FeaturePoint>& points);

void write_stats_json(const std::string& path, const DescriptorStats& stats);
DescriptorStats read_stats_json(const std::string& path);

std::string base64_encode(const uint8_t* data, size_t len);
std::vector<uint8_t> base64_decode(const std::string& text);

void write_text_file(const std::string& path, const std::string& text);
std::string read_text_file(const std::string& path);

}  // namespace curvireg

#endif
