#ifndef CURVIREG_DB_IO_HPP
#define CURVIREG_DB_IO_HPP

#include <string>

#include "curvireg/pipeline.hpp"

namespace curvireg {

/// Renders all viewpoints of a model into db_dir: depth PFMs, mask PGMs, pose
/// records, the normalized mesh and the manifest. Returns the view count.
int write_rendered_database(const std::string& db_dir, const std::string& model_path,
                            const std::vector<Viewpoint>& viewpoints,
                            const PipelineParams& params);

/// Computes depth-CS descriptors and feature points for every view in db_dir,
/// writes per-view descriptor files plus stats.json, and updates the manifest.
int describe_database(const std::string& db_dir, const PipelineParams& params);

/// Loads a database directory. Descriptors and statistics are read when the
/// describe step ran, otherwise computed in memory from the stored depths.
ViewDatabase load_database(const std::string& db_dir, const PipelineParams& params);

}  // namespace curvireg

#endif
