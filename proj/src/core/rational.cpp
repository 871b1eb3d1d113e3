#include "core/rational.hpp"

#include "core/error.hpp"

namespace palab {

static bool is_integer_token(const std::string& s) {
    if (s.empty()) return false;
    std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    if (i == s.size()) return false;
    for (; i < s.size(); ++i)
        if (s[i] < '0' || s[i] > '9') return false;
    return true;
}

// mpz_class(const char*) rejects a leading '+', which is_integer_token allows.
static Int int_of_token(const std::string& s) {
    return Int(s[0] == '+' ? s.substr(1) : s);
}

std::optional<Rat> rat_parse(const std::string& text) {
    auto slash = text.find('/');
    std::string num = (slash == std::string::npos) ? text : text.substr(0, slash);
    std::string den = (slash == std::string::npos) ? "1" : text.substr(slash + 1);
    if (!is_integer_token(num) || !is_integer_token(den)) return std::nullopt;
    Int n = int_of_token(num), d = int_of_token(den);
    if (d == 0) return std::nullopt;
    Rat q;
    mpq_set_num(q.get_mpq_t(), n.get_mpz_t());
    mpq_set_den(q.get_mpq_t(), d.get_mpz_t());
    q.canonicalize();
    return q;
}

std::string rat_render(const Rat& q) {
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

Rat rat_pow(const Rat& q, long e) {
    if (e == 0) return Rat(1);
    if (q == 0 && e < 0) contract_error("rat_pow: negative power of zero");
    unsigned long mag = (e < 0) ? static_cast<unsigned long>(-(e + 1)) + 1ul
                                : static_cast<unsigned long>(e);
    Int num, den;
    mpz_pow_ui(num.get_mpz_t(), q.get_num().get_mpz_t(), mag);
    mpz_pow_ui(den.get_mpz_t(), q.get_den().get_mpz_t(), mag);
    Rat out;
    if (e > 0) {
        mpq_set_num(out.get_mpq_t(), num.get_mpz_t());
        mpq_set_den(out.get_mpq_t(), den.get_mpz_t());
    } else {
        mpq_set_num(out.get_mpq_t(), den.get_mpz_t());
        mpq_set_den(out.get_mpq_t(), num.get_mpz_t());
    }
    out.canonicalize();
    return out;
}

Int int_pow(const Int& base, unsigned long e) {
    Int out;
    mpz_pow_ui(out.get_mpz_t(), base.get_mpz_t(), e);
    return out;
}

std::string int_render(const Int& v) { return v.get_str(); }

std::optional<Int> int_parse(const std::string& text) {
    if (!is_integer_token(text)) return std::nullopt;
    return int_of_token(text);
}

} // namespace palab
