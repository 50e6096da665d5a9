#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace pathlik {

/// Drift a(y; theta) in R^d, dispersion b(y; theta) in R^{d x m}, and
/// their spatial gradients. grad_a(y,theta)(i,j) = d a_i / d y_j;
/// grad_b(y,theta)[beta](i,j) = d b_{i,beta} / d y_j, one d x d matrix
/// per driver column beta.
struct ParametricVectorField {
    int d = 0;
    int m = 0;
    std::function<Eigen::VectorXd(const Eigen::VectorXd&, const Eigen::VectorXd&)> a;
    std::function<Eigen::MatrixXd(const Eigen::VectorXd&, const Eigen::VectorXd&)> b;
    std::function<Eigen::MatrixXd(const Eigen::VectorXd&, const Eigen::VectorXd&)> grad_a;
    std::function<std::vector<Eigen::MatrixXd>(const Eigen::VectorXd&, const Eigen::VectorXd&)>
        grad_b;
    /// Set when the gradients come from the central finite-difference
    /// fallback, which is lower accuracy than analytic derivatives.
    bool fd_gradients = false;
};

/// Fill in missing gradients by central finite differences with the
/// given spatial step.
ParametricVectorField with_fd_gradients(ParametricVectorField field,
                                        double step = 1e-6);

/// Scalar mean-reverting field a = -lambda*y, b = sigma. theta = (lambda, sigma).
ParametricVectorField make_fou_field();

/// Driftless field with b = sigma * I on R^d. theta = (sigma).
ParametricVectorField make_pure_integrator(int d);

/// Planar test field with rotational drift omega*(-y2, y1) and diagonal
/// dispersion kappa*diag(1, 1 + y1^2/(1+y1^2)); smooth, with b of full
/// rank everywhere. theta = (omega, kappa).
ParametricVectorField make_rotor2d_field();

/// Scalar state driven by two channels: a = -lambda*y, b = (sigma1, sigma2).
/// theta = (lambda, sigma1, sigma2). The overdetermined-driver test model.
ParametricVectorField make_ou_mix_field();

struct FieldInfo {
    ParametricVectorField field;
    std::vector<std::string> theta_names;
    Eigen::VectorXd default_theta;
    std::function<void(const Eigen::VectorXd&)> validate;  // throws on bad theta
    std::string description;
};

/// Built-in models plus user registrations, addressed by id.
class FieldRegistry {
public:
    static FieldRegistry& instance();

    void add(const std::string& id, FieldInfo info);
    bool has(const std::string& id) const;
    const FieldInfo& get(const std::string& id) const;
    std::vector<std::string> ids() const;

private:
    FieldRegistry();
    std::map<std::string, FieldInfo> fields_;
};

}  // namespace pathlik
