#include "bodies.hpp"

#include <cmath>
#include <json.hpp>
#include <numbers>

namespace fivol {

std::vector<double> classical_intrinsic_volumes(const ClassicalBody& K) {
    const int n = K.n;
    std::vector<double> V(n + 1, 0.0);
    V[0] = 1.0;
    if (K.kind == ClassicalBody::Kind::Ball) {
        for (int j = 1; j <= n; ++j)
            V[j] = binomial(n, j) * unit_ball_volume(n) * std::pow(K.rho, j) /
                   unit_ball_volume(n - j);
    } else {
        // boxes: V_j = e_j(side lengths)
        std::vector<double> e(n + 1, 0.0);
        e[0] = 1.0;
        for (int i = 0; i < n; ++i) {
            double s = 2.0 * K.halfwidths[i];
            for (int j = std::min(i + 1, n); j >= 1; --j) e[j] += e[j - 1] * s;
        }
        for (int j = 1; j <= n; ++j) V[j] = e[j];
    }
    return V;
}

double mink_volume(const ClassicalBody& K, double r) {
    const int n = K.n;
    if (K.kind == ClassicalBody::Kind::Ball)
        return unit_ball_volume(n) * std::pow(K.rho + r, n);
    if (n == 1) return 2.0 * K.halfwidths[0] + 2.0 * r;
    if (n == 2) {
        double s1 = 2.0 * K.halfwidths[0], s2 = 2.0 * K.halfwidths[1];
        return s1 * s2 + 2.0 * (s1 + s2) * r + std::numbers::pi * r * r;
    }
    if (n == 3) {
        double s1 = 2.0 * K.halfwidths[0], s2 = 2.0 * K.halfwidths[1],
               s3 = 2.0 * K.halfwidths[2];
        double faces = 2.0 * (s1 * s2 + s1 * s3 + s2 * s3);
        double edges = std::numbers::pi * (s1 + s2 + s3);
        return s1 * s2 * s3 + faces * r + edges * r * r +
               (4.0 / 3.0) * std::numbers::pi * r * r * r;
    }
    throw_numeric("mink_volume: only n <= 3 supported for boxes");
}

SpecPtr body_indicator(const ClassicalBody& K) {
    if (K.kind == ClassicalBody::Kind::Ball) return make_indicator_ball(K.n, K.rho);
    return make_indicator_box(K.halfwidths);
}

ClassicalBody body_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const std::exception& e) {
        throw_parse(std::string("body JSON: ") + e.what());
    }
    ClassicalBody K;
    std::string kind = j.value("kind", "");
    if (kind == "ball") {
        K.kind = ClassicalBody::Kind::Ball;
        K.n = j.at("n").get<int>();
        K.rho = j.at("rho").get<double>();
        if (K.rho <= 0.0) throw_parse("body JSON: rho must be positive");
    } else if (kind == "box") {
        K.kind = ClassicalBody::Kind::Box;
        const auto& h = j.at("halfwidths");
        K.n = static_cast<int>(h.size());
        K.halfwidths = Vec(K.n);
        for (int i = 0; i < K.n; ++i) {
            K.halfwidths[i] = h[i].get<double>();
            if (K.halfwidths[i] <= 0.0) throw_parse("body JSON: halfwidths must be positive");
        }
    } else {
        throw_parse("body JSON: kind must be 'ball' or 'box'");
    }
    if (K.n < 1 || K.n > 3) throw_parse("body JSON: n must be 1..3");
    return K;
}

}  // namespace fivol
