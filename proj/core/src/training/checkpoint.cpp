#include "dasr/training/checkpoint.hpp"

#include <filesystem>

#include "dasr/data/hash.hpp"
#include "dasr/error.hpp"

namespace dasr::training {

const nn::Tensor& Checkpoint::tensor(const std::string& name) const {
  for (const auto& [n, t] : tensors)
    if (n == name) return t;
  throw FormatError("checkpoint has no tensor '" + name + "'");
}

bool Checkpoint::has(const std::string& name) const {
  for (const auto& [n, t] : tensors)
    if (n == name) return true;
  return false;
}

nn::TensorArchive to_archive(const Checkpoint& ckpt) {
  nn::TensorArchive a;
  a.phase = ckpt.phase == Phase::dsn ? 1 : 2;
  a.iteration = ckpt.iteration;
  nlohmann::json meta = {{"config", ckpt.config}, {"rng", ckpt.rng_state}, {"extra", ckpt.extra}};
  a.metadata = meta.dump();
  a.tensors = ckpt.tensors;
  return a;
}

Checkpoint from_archive(const nn::TensorArchive& a) {
  if (a.phase != 1 && a.phase != 2) throw FormatError("checkpoint has unknown phase tag");
  Checkpoint c;
  c.phase = a.phase == 1 ? Phase::dsn : Phase::srn;
  c.iteration = a.iteration;
  try {
    const auto meta = nlohmann::json::parse(a.metadata);
    meta.at("config").get_to(c.config);
    c.rng_state = meta.at("rng").get<std::string>();
    c.extra = meta.at("extra");
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("checkpoint metadata unreadable: ") + e.what());
  }
  c.tensors = a.tensors;
  return c;
}

void save_checkpoint(const Checkpoint& ckpt, const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  nn::write_archive(to_archive(ckpt), path);
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  return from_archive(nn::read_archive(path));
}

void append_module(Checkpoint& ckpt, const std::string& prefix, const nn::Module& m) {
  for (const auto& p : m.parameters()) ckpt.tensors.emplace_back(prefix + "." + p.name, p.var->value);
}

void load_module(const Checkpoint& ckpt, const std::string& prefix, nn::Module& m) {
  for (const auto& p : m.parameters()) {
    const nn::Tensor& t = ckpt.tensor(prefix + "." + p.name);
    if (!(t.shape() == p.var->value.shape()))
      throw FormatError("checkpoint tensor " + prefix + "." + p.name + " has shape " +
                        nn::to_string(t.shape()) + ", model expects " +
                        nn::to_string(p.var->value.shape()));
  }
  for (const auto& p : m.parameters()) p.var->value = ckpt.tensor(prefix + "." + p.name);
}

std::string checkpoint_hash(const Checkpoint& ckpt) {
  const auto bytes = nn::serialize_archive(to_archive(ckpt));
  return data::sha256_hex({reinterpret_cast<const char*>(bytes.data()), bytes.size()});
}

}  // namespace dasr::training
