#include "compopt/freevect.hpp"

#include <stdexcept>
#include <string>

namespace compopt {

namespace {

void check_dim(const char* op, int expected, Eigen::Index got) {
    if (got != expected) {
        throw std::invalid_argument(std::string(op) + ": vector has dimension " +
                                    std::to_string(got) + ", function expects " +
                                    std::to_string(expected));
    }
}

}  // namespace

Vec pushforward_apply(const FinFunction& phi, const Vec& x) {
    check_dim("pushforward_apply", phi.dom_size(), x.size());
    Vec out = Vec::Zero(phi.codom_size());
    for (int i = 0; i < phi.dom_size(); ++i) out[phi(i)] += x[i];
    return out;
}

Vec pullback_apply(const FinFunction& phi, const Vec& y) {
    check_dim("pullback_apply", phi.codom_size(), y.size());
    Vec out(phi.dom_size());
    for (int i = 0; i < phi.dom_size(); ++i) out[i] = y[phi(i)];
    return out;
}

Mat pushforward_matrix(const FinFunction& phi) {
    Mat m = Mat::Zero(phi.codom_size(), phi.dom_size());
    for (int i = 0; i < phi.dom_size(); ++i) m(phi(i), i) = 1.0;
    return m;
}

Mat pullback_matrix(const FinFunction& phi) {
    Mat m = Mat::Zero(phi.dom_size(), phi.codom_size());
    for (int i = 0; i < phi.dom_size(); ++i) m(i, phi(i)) = 1.0;
    return m;
}

}  // namespace compopt
