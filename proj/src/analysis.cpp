#include "sumnet/analysis.hpp"

#include <algorithm>
#include <charconv>

namespace sumnet {

std::string to_string(const Rational& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

std::optional<Rational> parse_rational(std::string_view text) {
  auto parse_int = [](std::string_view s) -> std::optional<std::int64_t> {
    std::int64_t v = 0;
    if (s.empty()) return std::nullopt;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
    return v;
  };
  const auto slash = text.find('/');
  const auto num = parse_int(text.substr(0, slash));
  if (!num) return std::nullopt;
  if (slash == std::string_view::npos) return Rational(*num);
  const auto den = parse_int(text.substr(slash + 1));
  if (!den || *den == 0) return std::nullopt;
  return Rational(*num, *den);
}

Rational capacity(Family family, int m, std::int64_t q, int k) {
  if (k < 1) throw std::invalid_argument("k must be >= 1");
  if (family == Family::Bottleneck2) return Rational(k);
  if (m < 1 || q < 1) throw std::invalid_argument("capacity needs m >= 1 and q >= 1");
  return Rational(2 * k, m + 1);
}

Rational wrong_char_bound(int m, std::int64_t q) {
  if (m < 1 || q < 1) throw std::invalid_argument("bound needs m >= 1 and q >= 1");
  return Rational(2 * (q + 1), (m + 1) * (q + 1) + 2);
}

CompositeEncoding composites_of(const SumNetwork& net, const FracLinCode& code) {
  const Layering lay = layer(net);
  const TransferMap tm = transfer(net, code);
  CompositeEncoding out;
  for (const auto& mid : lay.middles) {
    const BlockTransfer& t = tm.edges[mid.edge.index];
    Mat c(code.field, code.l, static_cast<Index>(code.r) * static_cast<Index>(mid.reach.size()));
    for (std::size_t slot = 0; slot < mid.reach.size(); ++slot) {
      if (const Mat* b = t.block(net.source_position(mid.reach[slot]))) {
        c.set_block(0, static_cast<Index>(slot) * code.r, *b);
      }
    }
    out.maps.push_back(std::move(c));
  }
  return out;
}

DecoderSynthesizer::DecoderSynthesizer(const SumNetwork& net, int r, int l, PrimeField field)
    : net_(&net), r_(r), l_(l), field_(field), layering_(layer(net)) {
  if (r < 1 || l < 1) throw std::invalid_argument("code shape needs r, l >= 1");
  const std::size_t nsrc = net.sources().size();
  for (NodeId t : net.terminals()) {
    TerminalPlan plan{t, {}, {}, {}};
    const auto in = net.in_edges(t);
    std::vector<std::ptrdiff_t> group_of(nsrc, -1);
    for (std::size_t pos = 0; pos < in.size(); ++pos) {
      const EdgeId e = in[pos];
      if (layering_.kind[e.index] == Layering::Kind::Tap) {
        plan.taps.push_back(Tap{pos, layering_.middle_of[e.index], {}});
        continue;
      }
      const NodeId s = net.edge(e).tail;
      const std::size_t sp = net.source_position(s);
      if (group_of[sp] < 0) {
        group_of[sp] = static_cast<std::ptrdiff_t>(plan.direct.size());
        plan.direct.push_back(DirectGroup{sp, s, {}});
      }
      plan.direct[static_cast<std::size_t>(group_of[sp])].in_pos.push_back(pos);
    }
    for (DirectGroup& g : plan.direct) {
      std::sort(g.in_pos.begin(), g.in_pos.end(),
                [&](std::size_t a, std::size_t b) { return net.edge(in[a]).par < net.edge(in[b]).par; });
      const int d = static_cast<int>(g.in_pos.size());
      if ((r + d - 1) / d > l) {
        throw UnsupportedNetwork("terminal " + net.node(t).label + ": direct edges from " +
                                 net.node(g.source).label + " cannot carry an r-block at this l");
      }
    }
    for (std::size_t sp = 0; sp < nsrc; ++sp)
      if (group_of[sp] < 0) plan.required.push_back(sp);
    for (Tap& tap : plan.taps) {
      const auto& reach = layering_.middles[tap.middle].reach;
      for (std::size_t sp : plan.required) {
        const NodeId s = net.sources()[sp];
        const auto it = std::find(reach.begin(), reach.end(), s);
        tap.slot_of_required.push_back(it == reach.end() ? -1 : it - reach.begin());
      }
    }
    plans_.push_back(std::move(plan));
  }
}

std::size_t DecoderSynthesizer::composite_entries() const {
  std::size_t n = 0;
  for (const auto& mid : layering_.middles) n += static_cast<std::size_t>(l_) * r_ * mid.reach.size();
  return n;
}

void DecoderSynthesizer::check_composites(const CompositeEncoding& composites) const {
  if (composites.maps.size() != layering_.middles.size()) throw ShapeMismatch("composite count does not match the middle edges");
  for (std::size_t i = 0; i < composites.maps.size(); ++i) {
    const Mat& c = composites.maps[i];
    if (c.rows() != l_ || c.cols() != static_cast<Index>(r_) * static_cast<Index>(layering_.middles[i].reach.size()) ||
        c.field() != field_) {
      throw ShapeMismatch("composite of middle edge " + net_->edge_label(layering_.middles[i].edge) + " has the wrong shape");
    }
  }
}

// Solves D * M = [I_r ... I_r] over the required blocks, where M stacks the
// taps' composites; returns D (r x taps*l) or nullopt.
std::optional<Mat> DecoderSynthesizer::tap_decoders(const TerminalPlan& plan, const CompositeEncoding& composites) const {
  const Index taps = static_cast<Index>(plan.taps.size());
  const Index need = static_cast<Index>(plan.required.size());
  if (need == 0) return Mat(field_, r_, taps * l_);
  if (taps == 0) return std::nullopt;
  Mat stacked(field_, taps * l_, need * r_);
  for (Index t = 0; t < taps; ++t) {
    const Tap& tap = plan.taps[static_cast<std::size_t>(t)];
    const Mat& c = composites.maps[tap.middle];
    for (Index b = 0; b < need; ++b) {
      const std::ptrdiff_t slot = tap.slot_of_required[static_cast<std::size_t>(b)];
      if (slot < 0) continue;
      stacked.set_block(t * l_, b * r_, c.block(0, static_cast<Index>(slot) * r_, l_, r_));
    }
  }
  Mat target(field_, r_, need * r_);
  for (Index b = 0; b < need; ++b)
    for (Index c = 0; c < r_; ++c) target.set(c, b * r_ + c, 1);
  return solve_right(stacked, target);
}

bool DecoderSynthesizer::feasible(const CompositeEncoding& composites, std::string* failing) const {
  check_composites(composites);
  for (const TerminalPlan& plan : plans_) {
    if (!tap_decoders(plan, composites)) {
      if (failing) *failing = net_->node(plan.terminal).label;
      return false;
    }
  }
  return true;
}

Feasibility DecoderSynthesizer::solve(const CompositeEncoding& composites) const {
  check_composites(composites);
  const SumNetwork& net = *net_;
  FracLinCode code = forwarding_code(net, r_, l_, field_);
  for (std::size_t i = 0; i < layering_.middles.size(); ++i) {
    const auto& mid = layering_.middles[i];
    for (std::size_t slot = 0; slot < mid.feeders.size(); ++slot) {
      code.edge_maps[mid.feeders[slot].index].front() =
          composites.maps[i].block(0, static_cast<Index>(slot) * r_, l_, r_);
    }
  }
  const Mat id = Mat::identity(field_, r_);
  for (const TerminalPlan& plan : plans_) {
    const std::optional<Mat> d = tap_decoders(plan, composites);
    if (!d) return Feasibility{std::nullopt, net.node(plan.terminal).label};
    auto& decs = code.decoders[plan.terminal.index];
    for (std::size_t t = 0; t < plan.taps.size(); ++t) {
      decs[plan.taps[t].in_pos] = d->block(0, static_cast<Index>(t) * l_, r_, l_);
    }
    for (const DirectGroup& g : plan.direct) {
      Mat residual = id;
      for (std::size_t t = 0; t < plan.taps.size(); ++t) {
        const Tap& tap = plan.taps[t];
        const auto& reach = layering_.middles[tap.middle].reach;
        const auto it = std::find(reach.begin(), reach.end(), g.source);
        if (it == reach.end()) continue;
        const Mat blk = composites.maps[tap.middle].block(0, static_cast<Index>(it - reach.begin()) * r_, l_, r_);
        residual = residual - decs[tap.in_pos] * blk;
      }
      const int count = static_cast<int>(g.in_pos.size());
      for (int c = 0; c < count; ++c) {
        const auto [begin, len] = direct_split(r_, count, c);
        Mat dec(field_, r_, l_);
        if (len > 0) dec.set_block(0, 0, residual.block(0, begin, r_, len));
        decs[g.in_pos[static_cast<std::size_t>(c)]] = std::move(dec);
      }
    }
  }
  return Feasibility{std::move(code), {}};
}

Feasibility feasible_decoders(const SumNetwork& net, const CompositeEncoding& composites, int r, int l,
                              PrimeField field) {
  return DecoderSynthesizer(net, r, l, field).solve(composites);
}

}  // namespace sumnet
