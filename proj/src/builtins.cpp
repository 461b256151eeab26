#include "complag/parser.hpp"

namespace complag {

namespace {

const char* const kHingedRod = R"(# Light rigid rod of length l carrying mass m, hinged to a vertical axis it
# can slide along.  Inline abbreviations:
#   A = 4*l^2 - (z1+zb1)^2
#   B = (z1+zb1)*(zd1+zbd1)
[system]
name = hinged-rod
dof = 1

[params]
m = 1
g = 9.8
l = 1
theta = 0.3

[lagrangian]
L = 1/2*m*( l^2*(zd1+zbd1)^2/(4*l^2-(z1+zb1)^2) \
      + ((z1+zb1)*(zd1+zbd1))^2/(4*(4*l^2-(z1+zb1)^2)) \
      - 1/4*(zd1-zbd1)^2 \
      + l*sin(theta)*(zd1+zbd1)*(I*(zd1-zbd1) - (z1+zb1)*(zd1+zbd1)/sqrt(4*l^2-(z1+zb1)^2)) \
        /sqrt(4*l^2-(z1+zb1)^2) ) \
    - 1/2*I*m*g*(z1-zb1)

[singular]
A = 4*l^2-(z1+zb1)^2
axis = z1+zb1
)";

// The gravity term carries the unit -I so that it reduces to m*g*y*sign(x)
// on the real slice; with +I the sign of the potential flips.
const char* const kCentralForce = R"(# Body of mass m under a central force A*rho^(alpha-1) plus uniform gravity,
# moving in a vertical plane.
[system]
name = central-force
dof = 1

[params]
m = 1
g = 9.8
A = 2
alpha = 3

[lagrangian]
L = 1/2*m*zd1*zbd1 - A/alpha*sqrt(z1*zb1)^alpha \
    + I*m*g*(z1-zb1)*sqrt(z1*zb1)/((z1+zb1)*sqrt(1-(z1-zb1)^2/(z1+zb1)^2))

[singular]
axis = z1+zb1
origin = z1*zb1
)";

const char* const kOscillator = R"(# Isotropic planar oscillator with unit mass and frequency.
[system]
name = oscillator
dof = 1

[lagrangian]
L = zd1*zbd1 - z1*zb1
)";

const char* const kFreeParticle = R"([system]
name = free-particle
dof = 1

[lagrangian]
L = zd1*zbd1
)";

}  // namespace

const std::map<std::string, std::string>& builtin_systems() {
    static const std::map<std::string, std::string> systems{
        {"hinged-rod", kHingedRod},
        {"central-force", kCentralForce},
        {"oscillator", kOscillator},
        {"free-particle", kFreeParticle},
    };
    return systems;
}

}  // namespace complag
