#include "membound/algorithms.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace membound {

namespace {

Point project_to_ball(Point x, double radius) {
    const double n = x.norm();
    if (n > radius) {
        x *= radius / n;
    }
    return x;
}

}  // namespace

double gd_min_horizon(double lipschitz, double radius, double eps) {
    return 9.0 * lipschitz * lipschitz * radius * radius / (eps * eps);
}

std::size_t GDConfig::effective_horizon() const {
    if (horizon != 0) {
        return horizon;
    }
    const double t = gd_min_horizon(lipschitz, radius, eps);
    return static_cast<std::size_t>(std::ceil(t * (1.0 - 1e-12)));
}

double GDConfig::stepsize() const {
    return radius / (lipschitz * std::sqrt(static_cast<double>(effective_horizon())));
}

double GDConfig::iterate_error() const { return radius / static_cast<double>(effective_horizon()); }

double GDConfig::window_lo() const { return value_hi > value_lo ? value_lo : 0.0; }

double GDConfig::window_hi() const { return value_hi > value_lo ? value_hi : 2.0 * lipschitz * radius; }

double GDLayout::decode_best_value(const MemoryState& memory) const {
    const std::uint64_t field = memory.bits.read(value_offset, value_codec.bits_per_scalar);
    if (field > value_codec.intervals) {
        throw DomainError("gd: F_best field outside codebook");
    }
    return decode_scalar(value_codec, value_codec.intervals - field);
}

GDLayout make_gd_layout(const GDConfig& cfg) {
    GDLayout layout{make_vector_codec(cfg.dimension, cfg.radius, cfg.iterate_error()),
                    make_scalar_codec(cfg.window_lo(), cfg.window_hi(), cfg.eps, Rounding::down),
                    0,
                    0,
                    0,
                    0};
    layout.best_offset = layout.iterate_codec.bits_per_vector;
    layout.value_offset = 2 * layout.iterate_codec.bits_per_vector;
    layout.total_bits = layout.value_offset + layout.value_codec.bits_per_scalar;
    return layout;
}

AlgorithmSpec make_gd(const GDConfig& cfg) {
    if (cfg.dimension == 0 || !(cfg.lipschitz > 0.0) || !(cfg.radius > 0.0) || !(cfg.eps > 0.0)) {
        throw std::invalid_argument("make_gd: need d >= 1 and positive L, B, eps");
    }
    const std::size_t T = cfg.effective_horizon();
    if (static_cast<double>(T) < gd_min_horizon(cfg.lipschitz, cfg.radius, cfg.eps) * (1.0 - 1e-12)) {
        throw std::invalid_argument("make_gd: horizon " + std::to_string(T) + " below 9 L^2 B^2 / eps^2");
    }
    const GDLayout layout = make_gd_layout(cfg);
    const double eta = cfg.stepsize();
    const double radius = cfg.radius;

    AlgorithmSpec alg;
    alg.name = "gd";
    alg.dimension = cfg.dimension;
    alg.memory_budget = layout.total_bits;
    alg.horizon = T;
    alg.params = ProblemParams{cfg.lipschitz, cfg.radius, cfg.eps, cfg.seed};
    alg.decode = [layout](std::size_t, const MemoryState& memory) {
        return decode_vector(layout.iterate_codec, memory.bits, layout.x_offset);
    };
    alg.encode = [layout, eta, radius](std::size_t, const MemoryState& memory, const FirstOrderReply& reply) {
        const Point x = decode_vector(layout.iterate_codec, memory.bits, layout.x_offset);
        Point best = decode_vector(layout.iterate_codec, memory.bits, layout.best_offset);
        double best_value = layout.decode_best_value(memory);
        std::uint64_t best_field = memory.bits.read(layout.value_offset, layout.value_codec.bits_per_scalar);
        if (reply.value < best_value) {
            best_field = layout.value_codec.intervals - encode_scalar(layout.value_codec, reply.value);
            best = x;
        }
        const Point next = project_to_ball(x - eta * reply.subgradient, radius);

        MemoryState out = MemoryState::blank(memory.capacity);
        encode_vector(layout.iterate_codec, next, out.bits);
        encode_vector(layout.iterate_codec, best, out.bits);
        out.bits.append(best_field, layout.value_codec.bits_per_scalar);
        return out;
    };
    alg.output = [layout](const MemoryState& memory) {
        return decode_vector(layout.iterate_codec, memory.bits, layout.best_offset);
    };
    return alg;
}

AlgorithmSpec make_iterate_only_gd(std::size_t d, double lipschitz, double radius, std::size_t horizon,
                                   double max_error) {
    if (horizon == 0) {
        throw std::invalid_argument("make_iterate_only_gd: horizon must be positive");
    }
    const VectorCodec codec = make_vector_codec(d, radius, max_error);
    const double eta = radius / (lipschitz * std::sqrt(static_cast<double>(horizon)));

    AlgorithmSpec alg;
    alg.name = "gd-iterate-only";
    alg.dimension = d;
    alg.memory_budget = codec.bits_per_vector;
    alg.horizon = horizon;
    alg.params = ProblemParams{lipschitz, radius, max_error, 0};
    alg.decode = [codec](std::size_t, const MemoryState& memory) { return decode_vector(codec, memory.bits); };
    alg.encode = [codec, eta, radius](std::size_t, const MemoryState& memory, const FirstOrderReply& reply) {
        const Point x = decode_vector(codec, memory.bits);
        MemoryState out = MemoryState::blank(memory.capacity);
        encode_vector(codec, project_to_ball(x - eta * reply.subgradient, radius), out.bits);
        return out;
    };
    alg.output = [codec](const MemoryState& memory) { return decode_vector(codec, memory.bits); };
    return alg;
}

AlgorithmSpec make_constant_output(std::size_t d, std::size_t memory_bits) {
    const auto dim = static_cast<Eigen::Index>(d);
    AlgorithmSpec alg;
    alg.name = "constant";
    alg.dimension = d;
    alg.memory_budget = memory_bits;
    alg.horizon = 1;
    alg.decode = [dim](std::size_t, const MemoryState&) { return Point(Point::Zero(dim)); };
    alg.encode = [](std::size_t, const MemoryState& memory, const FirstOrderReply&) { return memory; };
    alg.output = [dim](const MemoryState&) { return Point(Point::Zero(dim)); };
    return alg;
}

AlgorithmSpec make_lookup_table(std::vector<Point> table, std::size_t memory_bits, double eps) {
    if (table.empty() || memory_bits > 63 || table.size() > (std::size_t{1} << memory_bits)) {
        throw std::invalid_argument("make_lookup_table: need 1 <= table size <= 2^M");
    }
    const auto width = static_cast<unsigned>(memory_bits);
    AlgorithmSpec alg;
    alg.name = "lookup-table";
    alg.dimension = static_cast<std::size_t>(table.front().size());
    alg.memory_budget = memory_bits;
    alg.horizon = table.size();
    alg.decode = [table](std::size_t t, const MemoryState&) { return table[(t - 1) % table.size()]; };
    alg.encode = [table, eps, width](std::size_t t, const MemoryState& memory, const FirstOrderReply& reply) {
        if (reply.value <= eps) {
            return MemoryState{memory.capacity, BitString::from_integer((t - 1) % table.size(), width)};
        }
        return memory;
    };
    alg.output = [table, width](const MemoryState& memory) {
        return table[memory.bits.read(0, width) % table.size()];
    };
    return alg;
}

std::size_t CoMConfig::base_horizon() const {
    return static_cast<std::size_t>(
        std::ceil(3.0 * static_cast<double>(dimension) * std::log(1.0 / alpha()) * (1.0 - 1e-12)));
}

double CoMConfig::window_lo() const { return value_hi > value_lo ? value_lo : 0.0; }

double CoMConfig::window_hi() const { return value_hi > value_lo ? value_hi : 2.0 * lipschitz * radius; }

namespace {

const CoMConfig& validated(const CoMConfig& cfg) {
    if (cfg.dimension == 0 || !(cfg.lipschitz > 0.0) || !(cfg.radius > 0.0) || !(cfg.eps > 0.0)) {
        throw std::invalid_argument("make_com: need d >= 1 and positive L, B, eps");
    }
    if (cfg.eps > cfg.lipschitz * cfg.radius / 2.0) {
        throw std::invalid_argument("make_com: need eps <= LB/2");
    }
    if (cfg.slack_factor == 0) {
        throw std::invalid_argument("make_com: slack_factor must be >= 1");
    }
    return cfg;
}

}  // namespace

CenterOfMass::CenterOfMass(const CoMConfig& cfg)
  : cfg_{validated(cfg)}
  , gradient_codec_{make_vector_codec(cfg.dimension, cfg.lipschitz, cfg.eps / (4.0 * cfg.radius))}
  // Nearest rounding at spacing 2 eps keeps |F~ - F| <= eps.
  , value_codec_{make_scalar_codec(cfg.window_lo(), cfg.window_hi(), 2.0 * cfg.eps, Rounding::nearest)}
  , output_codec_{make_vector_codec(cfg.dimension, cfg.radius, cfg.eps / cfg.lipschitz)} {}

Point CenterOfMass::stored_gradient(const MemoryState& memory, std::size_t round) const {
    return decode_vector(gradient_codec_, memory.bits, (round - 1) * record_bits());
}

double CenterOfMass::stored_value(const MemoryState& memory, std::size_t round) const {
    const std::size_t offset = (round - 1) * record_bits() + gradient_codec_.bits_per_vector;
    return decode_scalar(value_codec_, memory.bits.read(offset, value_codec_.bits_per_scalar));
}

void CenterOfMass::append_cut(CutSet& body, const MemoryState& memory, std::size_t round,
                              const Point& anchor) const {
    body.add_cut(stored_gradient(memory, round), anchor);
}

std::vector<Point> CenterOfMass::replay_centroids(const MemoryState& memory, std::size_t count) const {
    std::vector<Point> centroids;
    centroids.reserve(count);
    CutSet body(cfg_.dimension, cfg_.radius);
    for (std::size_t k = 1; k <= count; ++k) {
        centroids.push_back(estimate_centroid(body, derive_seed(cfg_.seed, k), cfg_.sampler));
        if (k < count) {
            append_cut(body, memory, k, centroids.back());
        }
    }
    return centroids;
}

CutSet CenterOfMass::cut_set(const MemoryState& memory, std::size_t rounds) const {
    CutSet body(cfg_.dimension, cfg_.radius);
    for (std::size_t k = 1; k <= rounds; ++k) {
        const Point c = estimate_centroid(body, derive_seed(cfg_.seed, k), cfg_.sampler);
        append_cut(body, memory, k, c);
    }
    return body;
}

Point CenterOfMass::decode(std::size_t t, const MemoryState& memory) const {
    return replay_centroids(memory, t).back();
}

MemoryState CenterOfMass::encode(std::size_t, const MemoryState& memory, const FirstOrderReply& reply) const {
    MemoryState out = memory;
    encode_vector(gradient_codec_, reply.subgradient, out.bits);
    out.bits.append(encode_scalar(value_codec_, reply.value), value_codec_.bits_per_scalar);
    return out;
}

Point CenterOfMass::output(const MemoryState& memory) const {
    const std::size_t T = cfg_.horizon();
    const auto centroids = replay_centroids(memory, T);
    std::size_t best = 1;
    double best_value = stored_value(memory, 1);
    for (std::size_t k = 2; k <= T; ++k) {
        const double v = stored_value(memory, k);
        if (v < best_value) {
            best = k;
            best_value = v;
        }
    }
    BitString code;
    encode_vector(output_codec_, centroids[best - 1], code);
    return decode_vector(output_codec_, code);
}

AlgorithmSpec make_com(const CoMConfig& cfg) {
    auto com = std::make_shared<const CenterOfMass>(cfg);
    AlgorithmSpec alg;
    alg.name = "com";
    alg.dimension = cfg.dimension;
    alg.memory_budget = com->total_bits();
    alg.horizon = cfg.horizon();
    alg.params = ProblemParams{cfg.lipschitz, cfg.radius, cfg.eps, cfg.seed};
    alg.decode = [com](std::size_t t, const MemoryState& memory) { return com->decode(t, memory); };
    alg.encode = [com](std::size_t t, const MemoryState& memory, const FirstOrderReply& reply) {
        return com->encode(t, memory, reply);
    };
    alg.output = [com](const MemoryState& memory) { return com->output(memory); };
    return alg;
}

double gd_memory_bound(std::size_t d, double lipschitz, double radius, double eps) {
    const double lb = lipschitz * radius;
    return 2.0 * static_cast<double>(d) * std::log2(1.0 + 36.0 * lb * lb / (eps * eps)) +
           std::log2(2.0 * lb / eps);
}

double com_memory_bound(std::size_t d, double lipschitz, double radius, double eps) {
    const double lb = lipschitz * radius;
    const double dd = static_cast<double>(d);
    const double l17 = std::log2(17.0 * lb / eps);
    return 3.0 * dd * dd * l17 * l17 + 3.0 * dd * std::log2(4.0 * lb / eps) * std::log2(2.0 * lb / eps) +
           dd * std::log2(1.0 + 4.0 * lb / eps);
}

}  // namespace membound
