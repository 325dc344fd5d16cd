"""
Événements de création de règles et traces de détection.

Une trace est un fichier texte, un événement par ligne :
``<stream_index>,<rule_index>,<kind>``.
"""

from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import List, Set, Union, Iterable

from ..utils.errors import TraceParseError


class EventKind(Enum):
    """Nature d'un événement structurel"""

    NEW_CLASS = "NewClass"
    DRIFT_SPLIT = "DriftSplit"


@dataclass(frozen=True)
class CreationEvent:
    """
    Création de règle à un instant du flux.

    :param stream_index: Position du point dans le flux (à partir de 0)
    :type stream_index: int
    :param rule_index: Indice de la règle concernée
    :type rule_index: int
    :param kind: Nature de l'événement
    :type kind: EventKind
    """

    stream_index: int
    rule_index: int
    kind: EventKind

    def __post_init__(self):
        if self.stream_index < 0:
            raise ValueError(f"Indice de flux négatif: {self.stream_index}")
        if self.rule_index < 0:
            raise ValueError(f"Indice de règle négatif: {self.rule_index}")

    def to_line(self) -> str:
        return f"{self.stream_index},{self.rule_index},{self.kind.value}"

    @classmethod
    def from_line(cls, line: str, line_number: int = 0) -> 'CreationEvent':
        """
        Lire un événement depuis une ligne de trace.

        :param line: Ligne ``index,règle,nature``
        :type line: str
        :param line_number: Numéro de ligne (messages d'erreur)
        :type line_number: int
        :return: Événement
        :rtype: CreationEvent
        :raises TraceParseError: Si la ligne est mal formée
        """
        parts = [part.strip() for part in line.strip().split(',')]
        if len(parts) != 3:
            raise TraceParseError(f"3 champs attendus, {len(parts)} trouvés: '{line.strip()}'", line_number)

        try:
            stream_index = int(parts[0])
            rule_index = int(parts[1])
        except ValueError:
            raise TraceParseError(f"indices non entiers: '{line.strip()}'", line_number)

        try:
            kind = EventKind(parts[2])
        except ValueError:
            raise TraceParseError(f"nature d'événement inconnue: '{parts[2]}'", line_number)

        try:
            return cls(stream_index, rule_index, kind)
        except ValueError as e:
            raise TraceParseError(str(e), line_number)


@dataclass
class DriftTrace:
    """
    Liste ordonnée d'événements de création.

    :param events: Événements, indices de flux strictement croissants
    :type events: List[CreationEvent]
    """

    events: List[CreationEvent] = field(default_factory=list)

    def __post_init__(self):
        for previous, current in zip(self.events, self.events[1:]):
            if current.stream_index <= previous.stream_index:
                raise ValueError(
                    f"Indices non croissants dans la trace: {previous.stream_index} puis {current.stream_index}")

    def append(self, event: CreationEvent):
        """
        Ajouter un événement en fin de trace.

        :param event: Événement
        :type event: CreationEvent
        :raises ValueError: Si l'indice n'est pas strictement croissant
        """
        if self.events and event.stream_index <= self.events[-1].stream_index:
            raise ValueError(f"Indice {event.stream_index} non croissant dans la trace")
        self.events.append(event)

    def extend(self, events: Iterable[CreationEvent]):
        for event in events:
            self.append(event)

    def indices(self, kind: EventKind) -> List[int]:
        """
        Indices de flux des événements d'une nature donnée.

        :param kind: Nature recherchée
        :type kind: EventKind
        :return: Indices croissants
        :rtype: List[int]
        """
        return [event.stream_index for event in self.events if event.kind is kind]

    @property
    def drift_indices(self) -> Set[int]:
        return set(self.indices(EventKind.DRIFT_SPLIT))

    @property
    def last_index(self) -> int:
        return self.events[-1].stream_index if self.events else -1

    def __len__(self) -> int:
        return len(self.events)

    def __iter__(self):
        return iter(self.events)

    def to_text(self) -> str:
        return "".join(f"{event.to_line()}\n" for event in self.events)

    def save(self, path: Union[str, Path]):
        """
        Écrire la trace dans un fichier texte.

        :param path: Chemin du fichier
        :type path: Union[str, Path]
        """
        Path(path).write_text(self.to_text(), encoding='utf-8')

    @classmethod
    def from_text(cls, text: str) -> 'DriftTrace':
        """
        Lire une trace depuis son texte. Les lignes vides sont ignorées.

        :param text: Contenu du fichier
        :type text: str
        :return: Trace
        :rtype: DriftTrace
        :raises TraceParseError: Si une ligne est mal formée ou non croissante
        """
        trace = cls()
        for line_number, line in enumerate(text.splitlines(), start=1):
            if not line.strip():
                continue
            event = CreationEvent.from_line(line, line_number)
            try:
                trace.append(event)
            except ValueError as e:
                raise TraceParseError(str(e), line_number)
        return trace

    @classmethod
    def load(cls, path: Union[str, Path]) -> 'DriftTrace':
        """
        Lire une trace depuis un fichier.

        :param path: Chemin du fichier
        :type path: Union[str, Path]
        :return: Trace
        :rtype: DriftTrace
        """
        return cls.from_text(Path(path).read_text(encoding='utf-8'))
