#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "kcenter/core.hpp"
#include "kcenter/rng.hpp"

namespace kcenter {

/// Seeded synthetic dataset description.
///   Unif — points i.i.d. uniform over [0, side]^dim.
///   Gau  — kprime cluster centers uniform in [0, side]^dim; each point joins
///          a uniformly random cluster, offset by an isotropic Gaussian with
///          per-coordinate std-dev sigma.
///   UnB  — like Gau, but cluster 0 receives half the points and the rest
///          split the other half evenly.
struct GenSpec {
    enum class Kind { Unif, Gau, UnB };

    Kind kind = Kind::Unif;
    std::size_t n = 1;
    std::size_t kprime = 1;  // inherent cluster count (Gau/UnB)
    std::size_t dim = 2;     // conventionally 2 for Unif, 3 for Gau/UnB
    double side = 100.0;     // bounding-cube edge length
    double sigma = 0.1;      // Gaussian std-dev per coordinate
    std::uint64_t seed = 0;

    void validate() const {
        if (n < 1) throw std::invalid_argument("GenSpec: n must be >= 1");
        if (dim < 1) throw std::invalid_argument("GenSpec: dim must be >= 1");
        if (side <= 0.0) throw std::invalid_argument("GenSpec: side must be > 0");
        if (kind != Kind::Unif) {
            if (kprime < 1) throw std::invalid_argument("GenSpec: kprime must be >= 1");
            if (kprime > n) throw std::invalid_argument("GenSpec: kprime must be <= n");
            if (sigma <= 0.0) throw std::invalid_argument("GenSpec: sigma must be > 0");
        }
        if (kind == Kind::UnB && kprime < 2)
            throw std::invalid_argument("GenSpec: UnB needs kprime >= 2");
    }

    std::string to_string() const {
        const char* k = kind == Kind::Unif ? "unif" : (kind == Kind::Gau ? "gau" : "unb");
        std::string s = std::string(k) + ":" + std::to_string(n) + ":" + std::to_string(kprime) +
                        ":" + std::to_string(dim) + ":";
        format_double(s, side);
        s += ":";
        format_double(s, sigma);
        return s;
    }
};

namespace detail {

inline PointSet gen_clustered(const GenSpec& spec, bool unbalanced) {
    Rng rng(mix64(spec.seed ^ 0x67656eULL));

    std::vector<double> centers(spec.kprime * spec.dim);
    for (double& c : centers) c = spec.side * rng.uniform();

    std::vector<double> coords(spec.n * spec.dim);
    for (std::size_t i = 0; i < spec.n; ++i) {
        std::size_t cluster;
        if (unbalanced) {
            // half the mass on cluster 0, the rest spread evenly
            if (rng.uniform() < 0.5)
                cluster = 0;
            else
                cluster = 1 + rng.uniform_index(spec.kprime - 1);
        } else {
            cluster = rng.uniform_index(spec.kprime);
        }
        const double* c = centers.data() + cluster * spec.dim;
        for (std::size_t t = 0; t < spec.dim; ++t)
            coords[i * spec.dim + t] = c[t] + spec.sigma * rng.normal();
    }
    return PointSet(std::move(coords), spec.dim);
}

}  // namespace detail

inline PointSet gen_unif(const GenSpec& spec) {
    spec.validate();
    if (spec.kind != GenSpec::Kind::Unif) throw std::invalid_argument("gen_unif: kind mismatch");
    Rng rng(mix64(spec.seed ^ 0x67656eULL));
    std::vector<double> coords(spec.n * spec.dim);
    for (double& v : coords) v = spec.side * rng.uniform();
    return PointSet(std::move(coords), spec.dim);
}

inline PointSet gen_gau(const GenSpec& spec) {
    spec.validate();
    if (spec.kind != GenSpec::Kind::Gau) throw std::invalid_argument("gen_gau: kind mismatch");
    return detail::gen_clustered(spec, false);
}

inline PointSet gen_unb(const GenSpec& spec) {
    spec.validate();
    if (spec.kind != GenSpec::Kind::UnB) throw std::invalid_argument("gen_unb: kind mismatch");
    return detail::gen_clustered(spec, true);
}

inline PointSet generate(const GenSpec& spec) {
    switch (spec.kind) {
        case GenSpec::Kind::Unif: return gen_unif(spec);
        case GenSpec::Kind::Gau: return gen_gau(spec);
        case GenSpec::Kind::UnB: return gen_unb(spec);
    }
    throw std::logic_error("generate: unknown kind");
}

}  // namespace kcenter
