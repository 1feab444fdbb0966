#include "doubtfire/wire.hpp"

#include <bit>
#include <string>

#include "doubtfire/errors.hpp"

namespace doubtfire {

namespace {

class Writer {
 public:
  explicit Writer(std::vector<std::uint8_t>& out) : out_(out) {}

  void u8(std::uint8_t v) { out_.push_back(v); }
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void f64(double v) {
    const auto bits = std::bit_cast<std::uint64_t>(v);
    for (int i = 0; i < 8; ++i) out_.push_back(static_cast<std::uint8_t>(bits >> (8 * i)));
  }

 private:
  std::vector<std::uint8_t>& out_;
};

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> in) : in_(in) {}

  std::uint8_t u8() {
    need(1);
    return in_[pos_++];
  }
  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(in_[pos_++]) << (8 * i);
    return v;
  }
  double f64() {
    need(8);
    std::uint64_t bits = 0;
    for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(in_[pos_++]) << (8 * i);
    return std::bit_cast<double>(bits);
  }
  std::size_t remaining() const { return in_.size() - pos_; }

 private:
  void need(std::size_t n) const {
    if (in_.size() - pos_ < n) throw Error("truncated team message frame");
  }

  std::span<const std::uint8_t> in_;
  std::size_t pos_ = 0;
};

}  // namespace

std::vector<std::uint8_t> encode(const TeamMessage& message) {
  const auto& o = message.outcome;
  std::vector<std::uint8_t> frame;
  frame.reserve(frame_size(o.payload.size()));
  Writer w(frame);
  w.u8(static_cast<std::uint8_t>(message.sender));
  w.u32(o.id.step);
  w.u32(o.id.cell);
  w.u8(o.dubious ? 1 : 0);
  w.f64(o.criteria.f_nan);
  w.f64(o.criteria.f_pa);
  w.f64(o.criteria.f_der);
  w.f64(o.criteria.f_dt);
  w.f64(o.local_dt);
  w.u32(static_cast<std::uint32_t>(o.payload.size()));
  for (double c : o.payload.coefficients()) w.f64(c);
  return frame;
}

TeamMessage decode(std::span<const std::uint8_t> frame, const PolynomialShape& shape) {
  Reader r(frame);
  TeamMessage m;
  const std::uint8_t team = r.u8();
  if (team > 1) throw Error("team message: invalid team byte " + std::to_string(team));
  m.sender = static_cast<TeamId>(team);
  auto& o = m.outcome;
  o.id.step = r.u32();
  o.id.cell = r.u32();
  const std::uint8_t dubious = r.u8();
  if (dubious > 1) throw Error("team message: invalid dubious byte");
  o.dubious = dubious == 1;
  o.criteria.f_nan = r.f64();
  o.criteria.f_pa = r.f64();
  o.criteria.f_der = r.f64();
  o.criteria.f_dt = r.f64();
  o.criteria.f_der_evaluated = o.criteria.f_der != 0.0;
  o.local_dt = r.f64();
  const std::uint32_t count = r.u32();
  if (count != shape.coefficient_count()) {
    throw ShapeMismatch("team message carries " + std::to_string(count) + " coefficients, expected " +
                        std::to_string(shape.coefficient_count()));
  }
  o.payload = CellPolynomial(shape);
  for (double& c : o.payload.coefficients()) c = r.f64();
  if (r.remaining() != 0) throw Error("team message: trailing bytes");
  return m;
}

}  // namespace doubtfire
