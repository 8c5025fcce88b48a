#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Dressed Lattice Simulator - Exécution parallèle des balayages
"""
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, List, TypeVar

T = TypeVar("T")
R = TypeVar("R")


def parallel_map(function: Callable[[T], R], items: Iterable[T], threads: int = 1) -> List[R]:
    """
    Applique une fonction pure à chaque point d'un balayage

    Args:
        function: Calcul indépendant pour un point
        items: Points du balayage
        threads: Nombre de fils (1 = séquentiel)

    Returns:
        Résultats dans l'ordre des points, quel que soit le nombre de fils
    """
    items = list(items)
    if threads <= 1 or len(items) <= 1:
        return [function(item) for item in items]
    with ThreadPoolExecutor(max_workers=threads) as executor:
        return list(executor.map(function, items))
