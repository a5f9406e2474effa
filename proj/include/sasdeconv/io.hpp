#pragma once

#include "sasdeconv/datagen.hpp"

#include <string>

namespace sasd {

struct IoError : std::runtime_error {
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

// Instance files: <prefix>.json metadata plus <prefix>.bin sidecar holding
// a0, x0, y as consecutive little-endian float64 arrays.
void save_instance(const PlantedInstance& inst, const std::string& prefix);
PlantedInstance load_instance(const std::string& json_path);

// Raw little-endian float64 vector files.
void save_vector_f64(const Vec& v, const std::string& path);
Vec load_vector_f64(const std::string& path);

}  // namespace sasd
