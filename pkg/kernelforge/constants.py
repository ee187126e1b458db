def reversed_dict(d):
    """Create a reverse lookup dictionary"""
    return dict([(b, a) for a, b in d])


def choices_as_set(d):
    """Handy to check if a discriminator is known"""
    return set([a for a, b in d])


class Constants(object):
    """Discriminators of the serialized kernel catalog"""

    FAMILY_CHOICES = (
        ('one', 'constant one kernel'),
        ('constant', 'constant kernel c'),
        ('exp_dot', 'exp(c <x, y>)'),
        ('table', 'user table by point'),
        ('gaussian', 'exp(-sigma |x - y|^2)'),
        ('cm_mixture', 'sum w exp(-r |x - y|^2)'),
        ('gneiting_classic', 'g(|u - v|^2)^(-m/2) psi(|x - y|^2 / g)'),
        ('gneiting_general', 'A(u, v) exp(-|x - y|^2 / gamma(u, v))'),
        ('matern', 'Matern correlation'),
        ('sq_distance', '|x - y|^2'),
        ('power_distance', '|x - y|^beta'),
        ('schoenberg', 'exp(-t gamma(x, y))'),
        ('cm_compose', 'f(gamma(x, y))'),
        ('minkowski', '[z, w] on the hyperboloid'),
        ('sech_power', '[z, w]^(-r)'),
        ('isotropic', 'sum w [z, w]^(-r)'),
        ('inverse_log_conditional', '1 / L(x, y)'),
        ('gamma_power_matrix', 'Gamma(nu_i + nu_j) / gamma^(nu_i + nu_j)'),
        ('matern_matrix', 'A_ij M(|x - y| / gamma^(1/2); alpha_ij, nu_ij)'),
        ('matern_hilbert_matrix', 'A_ij M(|x - y|; gamma^(1/2), nu_i + nu_j)'),
        ('matrix_gaussian', 'a_ij exp(-|x - y|^2 / gamma_ij)'),
        ('constant_matrix', 'a_ij'),
        ('separable_matrix', 'a_ij k(x, y)'),
    )

    MATRIX_FAMILIES = (
        'gamma_power_matrix',
        'matern_matrix',
        'matern_hilbert_matrix',
        'matrix_gaussian',
        'constant_matrix',
        'separable_matrix',
    )

    OP_CHOICES = (
        ('schur', 'p(x, y) q(x, y)'),
        ('tensor', 'p(x, y) q(z, w) on a product domain'),
        ('rescale', 'f(x) K(x, y) f(y)'),
        ('pullback', 'K(h(x), h(y))'),
        ('mixture', 'sum w_i K_i(x, y)'),
        ('flatten', 'L((x, i), (y, j)) = K_ij(x, y)'),
    )

    WEIGHT_CHOICES = (
        ('constant', 'c'),
        ('affine', 'a + <b, x>'),
        ('norm_exp', 'exp(-c |x|^2)'),
        ('table', 'lookup by point'),
    )

    MAP_CHOICES = (
        ('identity', 'x'),
        ('constant', 'fixed point'),
        ('affine', 'A x + b'),
        ('lift', 'chart to hyperboloid'),
        ('table', 'lookup by point'),
    )

    FUNCTION_CHOICES = (
        ('exp_decay', 'exp(-c t)'),
        ('power_decay', '(1 + c t)^(-tau)'),
        ('power', 't^beta'),
        ('affine', 'a + b t'),
        ('power_shift', '(1 + a t)^beta'),
        ('log1p', 'log(1 + t)'),
        ('log_shift', 'log(e + t)'),
        ('sech_power', 'sech(t)^r'),
        ('sine', 'sin(t)'),
        ('table', 'piecewise linear table'),
    )

    # Completely monotone / Bernstein catalogs for the classic Gneiting class
    CM_FUNCTIONS = ('exp_decay', 'power_decay')
    BERNSTEIN_FUNCTIONS = ('affine', 'power_shift', 'log_shift')

    PREDICATE_CHOICES = (
        ('cnd', 'conditionally negative definite'),
        ('metrizable', 'metrizable CND kernel'),
        ('hyperbolic', 'hyperbolic kernel'),
        ('log-conditional', 'log-conditional kernel'),
        ('cm', 'completely monotone function'),
        ('bernstein', 'Bernstein function'),
    )

    PSD_CLASS_PD = 'PD'
    PSD_CLASS_PSD = 'PSD'
    PSD_CLASS_INDEFINITE = 'INDEFINITE'

    EXIT_CODE_CHOICES = (
        (0, 'pass'),
        (1, 'predicate-fail'),
        (2, 'input-error'),
    )


EXIT_CODES = reversed_dict(Constants.EXIT_CODE_CHOICES)
