#include "discflow/flows/checkpoint.hpp"

#include <fstream>

#include "discflow/numcore/serialize.hpp"

namespace discflow::flows {

namespace {

using numcore::BinaryReader;
using numcore::BinaryWriter;

constexpr std::uint32_t kMagic = 0x574C4644u;  // "DFLW"
constexpr std::uint32_t kVersion = 1u;

enum LayerKind : std::uint32_t { kCoupling = 0, kReverse = 1, kAffine = 2 };

void write_coupling(BinaryWriter& w, const CouplingLayer& c) {
  w.u32(static_cast<std::uint32_t>(c.dim()));
  for (auto m : c.mask()) w.u8(m);
  w.u32(static_cast<std::uint32_t>(c.ctx_dim()));
  w.f64(c.clamp());
  numcore::write_mlp(w, c.conditioner());
}

CouplingLayer read_coupling(BinaryReader& r) {
  const std::uint32_t dim = r.u32();
  if (dim == 0 || dim > (1u << 24)) throw FormatError("checkpoint: bad coupling dim");
  std::vector<std::uint8_t> mask(dim);
  for (auto& m : mask) m = r.u8();
  const std::uint32_t ctx = r.u32();
  const double clamp = r.f64();
  numcore::Mlp cond = numcore::read_mlp(r);
  return CouplingLayer(std::move(mask), static_cast<int>(ctx), clamp, std::move(cond));
}

}  // namespace

void save_checkpoint(const std::string& path, const FlowModel& model) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("save_checkpoint: cannot open " + path);
  BinaryWriter w(os);
  w.u32(kMagic);
  w.u32(kVersion);
  w.u32(static_cast<std::uint32_t>(model.tphi.dim));
  w.u32(static_cast<std::uint32_t>(model.tlambda.levels));

  w.u32(static_cast<std::uint32_t>(model.tphi.layers.size()));
  for (const auto& layer : model.tphi.layers) {
    if (const auto* c = std::get_if<CouplingLayer>(&layer)) {
      w.u32(kCoupling);
      write_coupling(w, *c);
    } else if (std::holds_alternative<ReverseLayer>(layer)) {
      w.u32(kReverse);
    } else {
      const auto& a = std::get<AffineLayer>(layer);
      w.u32(kAffine);
      w.u32(static_cast<std::uint32_t>(a.scale.size()));
      for (double v : a.scale) w.f64(v);
      for (double v : a.shift) w.f64(v);
    }
  }

  w.u32(static_cast<std::uint32_t>(model.tlambda.layers.size()));
  for (const auto& c : model.tlambda.layers) write_coupling(w, c);
}

FlowModel load_checkpoint(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("load_checkpoint: cannot open " + path);
  BinaryReader r(is);
  if (r.u32() != kMagic) throw FormatError("load_checkpoint: bad magic");
  if (r.u32() != kVersion) throw FormatError("load_checkpoint: unsupported version");
  FlowModel model;
  model.tphi.dim = static_cast<int>(r.u32());
  const int levels = static_cast<int>(r.u32());

  const std::uint32_t n_phi = r.u32();
  for (std::uint32_t i = 0; i < n_phi; ++i) {
    const std::uint32_t kind = r.u32();
    if (kind == kCoupling) {
      model.tphi.layers.emplace_back(read_coupling(r));
    } else if (kind == kReverse) {
      model.tphi.layers.emplace_back(ReverseLayer{});
    } else if (kind == kAffine) {
      const std::uint32_t n = r.u32();
      Vec scale(n), shift(n);
      for (auto& v : scale) v = r.f64();
      for (auto& v : shift) v = r.f64();
      model.tphi.layers.emplace_back(AffineLayer(std::move(scale), std::move(shift)));
    } else {
      throw FormatError("load_checkpoint: unknown layer kind");
    }
  }

  model.tlambda.dim = model.tphi.dim;
  model.tlambda.levels = levels;
  const std::uint32_t n_lam = r.u32();
  for (std::uint32_t i = 0; i < n_lam; ++i) {
    model.tlambda.layers.emplace_back(read_coupling(r));
  }
  return model;
}

}  // namespace discflow::flows
