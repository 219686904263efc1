#include "mmskit/rational.hpp"

#include <cctype>
#include <ostream>

#include "mmskit/errors.hpp"

namespace mmskit {

namespace {

bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s) {
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    }
    return true;
}

mpz_class parse_natural(std::string_view s, std::string_view context) {
    if (!all_digits(s)) {
        throw ParseError("invalid rational '" + std::string(context) + "'");
    }
    return mpz_class(std::string(s), 10);
}

}  // namespace

static_assert(sizeof(long) == sizeof(std::int64_t), "GMP si constructors need a 64-bit long");

Rational::Rational(std::int64_t value) : q_(static_cast<long>(value)) {}

Rational::Rational(std::int64_t num, std::int64_t den) {
    if (den == 0) throw DomainError("rational with zero denominator");
    q_ = mpq_class(mpz_class(static_cast<long>(num)), mpz_class(static_cast<long>(den)));
    q_.canonicalize();
}

Rational::Rational(mpq_class q) : q_(std::move(q)) { q_.canonicalize(); }

Rational& Rational::operator/=(const Rational& o) {
    if (o.is_zero()) throw DomainError("division by zero");
    q_ /= o.q_;
    return *this;
}

Rational Rational::parse_value(std::string_view text) {
    const auto slash = text.find('/');
    if (slash == std::string_view::npos) {
        return Rational(mpq_class(parse_natural(text, text)));
    }
    mpz_class num = parse_natural(text.substr(0, slash), text);
    mpz_class den = parse_natural(text.substr(slash + 1), text);
    if (den == 0) throw ParseError("zero denominator in '" + std::string(text) + "'");
    return Rational(mpq_class(num, den));
}

Rational Rational::parse(std::string_view text) {
    std::string compact;
    for (char c : text) {
        if (!std::isspace(static_cast<unsigned char>(c))) compact.push_back(c);
    }
    if (compact.empty()) throw ParseError("empty rational");

    Rational total;
    std::size_t pos = 0;
    int sign = 1;
    if (compact[0] == '+' || compact[0] == '-') {
        sign = compact[0] == '-' ? -1 : 1;
        pos = 1;
    }
    while (true) {
        const auto next = compact.find_first_of("+-", pos);
        const std::string_view term(compact.data() + pos,
                                    (next == std::string::npos ? compact.size() : next) - pos);
        Rational value = parse_value(term);
        total += sign < 0 ? -value : value;
        if (next == std::string::npos) break;
        sign = compact[next] == '-' ? -1 : 1;
        pos = next + 1;
    }
    return total;
}

std::string Rational::to_fraction_string() const {
    return q_.get_num().get_str() + "/" + q_.get_den().get_str();
}

std::string Rational::to_string() const {
    return is_integer() ? q_.get_num().get_str() : to_fraction_string();
}

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.to_string(); }

}  // namespace mmskit
