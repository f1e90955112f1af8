import rospy
import smach

from robot_skills.navigation import NavigateToRoom, NavigateToWaypoint, _DecideNavigateState
from robot_skills.detection import LookForPerson
from robot_skills.speech import Say


class FindPerson(smach.StateMachine):
    """Decide between waypoint and room targets, then search for a person."""

    def __init__(self, robot, room, found_person_designator):
        smach.StateMachine.__init__(self, outcomes=['succeeded', 'failed'])
        self.robot = robot
        with self:
            smach.StateMachine.add('SAY_START',
                                   Say(robot, 'I am going to look for a person.'),
                                   transitions={'spoken': 'DECIDE_NAVIGATE_STATE'})

            smach.StateMachine.add('DECIDE_NAVIGATE_STATE',
                                   _DecideNavigateState(robot, room),
                                   transitions={'waypoint': 'NAVIGATE_TO_WAYPOINT',
                                                'room': 'NAVIGATE_TO_ROOM',
                                                'none': 'SAY_FAILED'})

            smach.StateMachine.add('NAVIGATE_TO_WAYPOINT',
                                   NavigateToWaypoint(robot, room),
                                   transitions={'arrived': 'LOOK_FOR_PERSON',
                                                'unreachable': 'DECIDE_NAVIGATE_STATE',
                                                'blocked': 'NAVIGATE_TO_WAYPOINT'})

            smach.StateMachine.add('NAVIGATE_TO_ROOM',
                                   NavigateToRoom(robot, room),
                                   transitions={'arrived': 'LOOK_FOR_PERSON',
                                                'unreachable': 'DECIDE_NAVIGATE_STATE'})

            smach.StateMachine.add('LOOK_FOR_PERSON',
                                   LookForPerson(robot, found_person_designator),
                                   transitions={'found': 'SAY_FOUND',
                                                'not_found': 'DECIDE_NAVIGATE_STATE'})

            smach.StateMachine.add('SAY_FOUND',
                                   Say(robot, 'I found you.'),
                                   transitions={'spoken': 'succeeded'})

            smach.StateMachine.add('SAY_FAILED',
                                   Say(robot, 'I could not find anyone.'),
                                   transitions={'spoken': 'failed'})


if __name__ == '__main__':
    rospy.init_node('find_person')
    sm = FindPerson(None, 'living_room', None)
    sm.execute()
