#include "sasdeconv/io.hpp"

#include "sasdeconv/rng.hpp"

#include <json.hpp>

#include <bit>
#include <cstdio>
#include <fstream>

static_assert(std::endian::native == std::endian::little,
              "instance sidecar format assumes a little-endian host");

namespace sasd {
namespace {

using json = nlohmann::ordered_json;

constexpr int kFormatVersion = 1;

void write_doubles(std::ofstream& os, const Vec& v) {
  os.write(reinterpret_cast<const char*>(v.data()),
           static_cast<std::streamsize>(sizeof(double) * v.size()));
}

Vec read_doubles(std::ifstream& is, long count) {
  Vec v(count);
  is.read(reinterpret_cast<char*>(v.data()),
          static_cast<std::streamsize>(sizeof(double) * count));
  if (!is) throw IoError("sidecar truncated");
  return v;
}

std::string basename_of(const std::string& path) {
  const auto pos = path.find_last_of('/');
  return pos == std::string::npos ? path : path.substr(pos + 1);
}

std::string dirname_of(const std::string& path) {
  const auto pos = path.find_last_of('/');
  return pos == std::string::npos ? std::string(".") : path.substr(0, pos);
}

}  // namespace

void save_instance(const PlantedInstance& inst, const std::string& prefix) {
  const std::string bin_path = prefix + ".bin";
  const std::string json_path = prefix + ".json";

  std::ofstream bin(bin_path, std::ios::binary | std::ios::trunc);
  if (!bin) throw IoError("cannot open " + bin_path + " for writing");
  write_doubles(bin, inst.a0.values);
  write_doubles(bin, inst.x0.values);
  write_doubles(bin, inst.y.values());
  bin.close();
  if (!bin) throw IoError("write failed: " + bin_path);

  json meta;
  meta["format"] = "sasdeconv-instance";
  meta["format_version"] = kFormatVersion;
  meta["rng"] = Rng::kVersion;
  meta["spec"] = {
      {"p0", inst.spec.p0},
      {"n", inst.spec.n},
      {"theta", inst.spec.theta},
      {"family", family_name(inst.spec.family)},
      {"lowpass_L", inst.spec.lowpass_L},
      {"lowpass_beta", inst.spec.lowpass_beta},
      {"spiky_noise", inst.spec.spiky_noise},
      {"seed", inst.spec.seed},
  };
  meta["sidecar"] = basename_of(bin_path);
  meta["layout"] = {
      {"a0", {{"offset", 0}, {"count", inst.a0.length()}}},
      {"x0", {{"offset", inst.a0.length()}, {"count", inst.x0.n()}}},
      {"y", {{"offset", inst.a0.length() + inst.x0.n()}, {"count", inst.y.n()}}},
  };
  meta["x0_support_size"] = inst.x0.support.size();

  std::ofstream js(json_path, std::ios::trunc);
  if (!js) throw IoError("cannot open " + json_path + " for writing");
  js << meta.dump(2) << '\n';
  js.close();
  if (!js) throw IoError("write failed: " + json_path);
}

PlantedInstance load_instance(const std::string& json_path) {
  std::ifstream js(json_path);
  if (!js) throw IoError("cannot open " + json_path);
  json meta;
  try {
    js >> meta;
  } catch (const std::exception& e) {
    throw IoError("bad instance metadata: " + std::string(e.what()));
  }
  if (meta.value("format", "") != "sasdeconv-instance")
    throw IoError(json_path + ": not a sasdeconv instance file");

  PlantedInstance inst;
  const auto& spec = meta.at("spec");
  inst.spec.p0 = spec.at("p0").get<int>();
  inst.spec.n = spec.at("n").get<long>();
  inst.spec.theta = spec.at("theta").get<double>();
  inst.spec.family = family_from_name(spec.at("family").get<std::string>());
  inst.spec.lowpass_L = spec.value("lowpass_L", 0);
  inst.spec.lowpass_beta = spec.value("lowpass_beta", 0.0);
  inst.spec.spiky_noise = spec.value("spiky_noise", -1.0);
  inst.spec.seed = spec.at("seed").get<std::uint64_t>();

  const std::string bin_path =
      dirname_of(json_path) + "/" + meta.at("sidecar").get<std::string>();
  std::ifstream bin(bin_path, std::ios::binary);
  if (!bin) throw IoError("cannot open sidecar " + bin_path);
  inst.a0 = Kernel(read_doubles(bin, inst.spec.p0));
  inst.x0 = SparseMap::from_dense(read_doubles(bin, inst.spec.n));
  inst.y = Observation(read_doubles(bin, inst.spec.n));
  return inst;
}

void save_vector_f64(const Vec& v, const std::string& path) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw IoError("cannot open " + path + " for writing");
  write_doubles(os, v);
  os.close();
  if (!os) throw IoError("write failed: " + path);
}

Vec load_vector_f64(const std::string& path) {
  std::ifstream is(path, std::ios::binary | std::ios::ate);
  if (!is) throw IoError("cannot open " + path);
  const auto bytes = static_cast<long>(is.tellg());
  if (bytes % sizeof(double) != 0) throw IoError(path + ": size not a multiple of 8");
  is.seekg(0);
  return read_doubles(is, bytes / static_cast<long>(sizeof(double)));
}

}  // namespace sasd
