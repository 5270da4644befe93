"""Exceções do domínio."""


class WreathError(Exception):
    """Base para erros de pré-condição da biblioteca."""


class DepthError(WreathError, ValueError):
    """Profundidade inválida ou incompatível."""


class NotInKernelError(WreathError, ValueError):
    """Elemento fora de K_n."""


class ParseError(WreathError, ValueError):
    """Texto de elemento, lista de geradores ou registro malformado."""


class ClosureLimitError(WreathError, RuntimeError):
    """Fecho excedeu o limite configurado."""


class EnumerationLimitError(WreathError, ValueError):
    """Enumeração exaustiva pedida acima do teto configurado."""


class HypothesisViolation(WreathError, ValueError):
    """Critério chamado fora de suas hipóteses."""


class RelationError(WreathError, ValueError):
    """Relação exigida como pré-condição não vale."""


class MissingWitnessError(WreathError, KeyError):
    """Mapa de testemunhas incompleto."""


class MembershipError(WreathError, ValueError):
    """Elemento pertence ao subgrupo quando não deveria."""


class DimensionError(WreathError, ValueError):
    """Comprimentos de vetores ou subespaços incompatíveis."""


class InvalidAutomorphismError(WreathError, ValueError):
    """Permutação que não preserva a estrutura da árvore."""


class UsageError(WreathError, ValueError):
    """Argumentos de linha de comando inválidos."""
