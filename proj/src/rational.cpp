#include "brattelikit/rational.hpp"

#include "brattelikit/errors.hpp"

namespace brattelikit {

Rational rational_from_string(const std::string& s) {
    if (s.empty()) throw Error("empty rational literal");
    mpq_class q;
    if (q.set_str(s, 10) != 0) throw Error("malformed rational literal: " + s);
    q.canonicalize();
    if (q.get_den() == 0) throw Error("zero denominator in rational literal: " + s);
    return q;
}

std::string rational_to_string(const Rational& q) {
    Rational c = q;
    c.canonicalize();
    if (c.get_den() == 1) return c.get_num().get_str();
    return c.get_num().get_str() + "/" + c.get_den().get_str();
}

std::vector<double> to_double_vec(const std::vector<Rational>& v) {
    std::vector<double> out;
    out.reserve(v.size());
    for (const auto& q : v) out.push_back(q.get_d());
    return out;
}

}  // namespace brattelikit
