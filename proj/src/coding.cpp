#include "mwnc/coding.hpp"

#include <charconv>
#include <numeric>
#include <stdexcept>

#include "mwnc/random.hpp"

namespace mwnc {

Rational::Rational(std::int64_t n, std::int64_t d) {
  if (d <= 0) throw std::invalid_argument("rational denominator must be positive");
  if (n < 0) throw std::invalid_argument("rational must be non-negative");
  const std::int64_t g = std::gcd(n, d);
  num = n / (g == 0 ? 1 : g);
  den = d / (g == 0 ? 1 : g);
}

namespace {

std::int64_t parse_int(std::string_view text) {
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw std::invalid_argument("not an integer: '" + std::string(text) + "'");
  }
  return v;
}

}  // namespace

Rational Rational::parse(std::string_view text) {
  while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
  while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
  if (text.empty()) throw std::invalid_argument("empty rational");

  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    return Rational(parse_int(text.substr(0, slash)), parse_int(text.substr(slash + 1)));
  }
  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    const auto whole = text.substr(0, dot);
    const auto frac = text.substr(dot + 1);
    if (frac.size() > 15) throw std::invalid_argument("too many decimal places");
    std::int64_t den = 1;
    for (std::size_t k = 0; k < frac.size(); ++k) den *= 10;
    const std::int64_t w = whole.empty() ? 0 : parse_int(whole);
    const std::int64_t f = frac.empty() ? 0 : parse_int(frac);
    return Rational(w * den + f, den);
  }
  return Rational(parse_int(text), 1);
}

std::string Rational::str() const {
  if (den == 1) return std::to_string(num);
  return std::to_string(num) + "/" + std::to_string(den);
}

std::string_view to_string(InjectionKind kind) {
  return kind == InjectionKind::constant ? "constant" : "bernoulli";
}

InjectionKind parse_injection_kind(std::string_view text) {
  if (text == "constant") return InjectionKind::constant;
  if (text == "bernoulli") return InjectionKind::bernoulli;
  throw std::invalid_argument("unknown injection kind '" + std::string(text) + "'");
}

std::int64_t InjectionProcess::ticks(std::int64_t t) const {
  if (kind == InjectionKind::constant) return lambda.num;
  const std::uint64_t h = rng::hash(seed, rng::kInjectionStream, static_cast<std::uint64_t>(t));
  // P(a[t] = 1) = num/den exactly, up to the 2^-64 granularity of the hash.
  const bool arrival = rng::below(h, static_cast<std::uint64_t>(lambda.den)) <
                       static_cast<std::uint64_t>(lambda.num);
  return arrival ? lambda.den : 0;
}

void InjectionProcess::validate() const {
  if (lambda.num <= 0 || lambda.num > lambda.den) {
    throw std::invalid_argument("injection rate lambda must lie in (0, 1], got " + lambda.str());
  }
}

PayloadSource::PayloadSource(std::uint64_t seed, std::size_t symbols_per_packet, unsigned q)
    : seed_(seed),
      symbols_(symbols_per_packet),
      mask_(q >= 32 ? 0xFFFFFFFFu : static_cast<Symbol>((1u << q) - 1)) {}

Packet PayloadSource::make(std::int64_t id) const {
  Packet p;
  p.id = id;
  p.symbols.resize(symbols_);
  for (std::size_t k = 0; k < symbols_; ++k) {
    p.symbols[k] = static_cast<Symbol>(
        rng::hash(seed_, rng::kPayloadStream, static_cast<std::uint64_t>(id), k) & mask_);
  }
  return p;
}

Symbol CoefficientStream::at(std::int64_t t, std::int64_t m) const {
  const std::uint64_t h = rng::hash(seed_, rng::kCoefficientStream, static_cast<std::uint64_t>(t),
                                    static_cast<std::uint64_t>(m));
  return static_cast<Symbol>(1 + rng::below(h, nonzero_));
}

void CoefficientStream::fill(std::int64_t t, std::int64_t lo, std::span<Symbol> out) const {
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = at(t, lo + static_cast<std::int64_t>(k));
}

void AssemblyLog::record(std::int64_t id, std::int64_t slot) {
  if (id != last_id() + 1) throw std::logic_error("assembly ids must be consecutive");
  slots_.push_back(slot);
}

std::int64_t AssemblyLog::slot_of(std::int64_t id) const {
  if (id <= base_ || id > last_id()) {
    throw std::out_of_range("packet " + std::to_string(id) + " not in assembly log");
  }
  return slots_[static_cast<std::size_t>(id - base_ - 1)];
}

void AssemblyLog::drop_through(std::int64_t id) {
  while (base_ < id && !slots_.empty()) {
    slots_.pop_front();
    ++base_;
  }
}

Encoder::Encoder(InjectionProcess injection, const GaloisField& field,
                 std::uint64_t coefficient_seed, const PayloadSource* payload)
    : injection_(injection),
      field_(field),
      coefficients_(coefficient_seed, field),
      payload_(payload) {
  injection_.validate();
  arrivals_.unit = injection_.unit();
}

std::int64_t Encoder::inject(std::int64_t t) {
  if (t != slot_ + 1) throw std::logic_error("inject must be called for consecutive slots");
  slot_ = t;
  const std::int64_t before = arrivals_.whole();
  last_ticks_ = injection_.ticks(t);
  arrivals_.ticks += last_ticks_;
  const std::int64_t after = arrivals_.whole();
  if (payload_ != nullptr) {
    for (std::int64_t id = before + 1; id <= after; ++id) buffer_.push_back(payload_->make(id));
  }
  return after - before;
}

CodedPacket Encoder::encode(std::int64_t t) const {
  if (t != slot_) throw std::logic_error("encode called before inject for this slot");
  CodedPacket cp;
  cp.slot = t;
  cp.lo = departed_ + 1;
  cp.hi = arrivals_.whole();
  if (payload_ == nullptr) return cp;
  cp.payload.assign(payload_->symbols_per_packet(), 0);
  if (cp.idle()) return cp;
  cp.coefficients.resize(static_cast<std::size_t>(cp.window()));
  coefficients_.fill(t, cp.lo, cp.coefficients);
  for (std::size_t k = 0; k < cp.coefficients.size(); ++k) {
    field_.axpy(cp.payload, cp.coefficients[k], buffer_[k].symbols);
  }
  return cp;
}

void Encoder::remove_oldest(std::int64_t count) {
  if (count < 1) throw std::invalid_argument("remove_oldest count must be >= 1");
  if (window() < count) {
    throw std::logic_error("remove_oldest(" + std::to_string(count) + ") on a buffer of " +
                           std::to_string(window()) + " packets at slot " + std::to_string(slot_));
  }
  departed_ += count;
  if (payload_ != nullptr) {
    for (std::int64_t k = 0; k < count; ++k) buffer_.pop_front();
  }
}

}  // namespace mwnc
