"""Bearer-token authentication against the static token map."""

from ..errors import InvalidToken
from ..skills.registry import ANONYMOUS, Principal


def authenticate(authorization: str | None, tokens: dict[str, str]) -> Principal:
    """Resolve the Authorization header to a principal.

    No header means the anonymous principal. A well-formed bearer token must
    be known; anything else is an authentication error.
    """
    if authorization is None or not authorization.strip():
        return ANONYMOUS
    parts = authorization.split()
    if len(parts) != 2 or parts[0].lower() != "bearer":
        raise InvalidToken("expected 'Bearer <token>'")
    user_id = tokens.get(parts[1])
    if user_id is None:
        raise InvalidToken("unknown token")
    return Principal(user_id)
